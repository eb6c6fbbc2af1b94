"""Exact homology, disc filling, and the dimension/connectivity arithmetic
behind the topological-complexity bound.

Homology is computed from sparse integer boundary matrices (entries are the
signs of sorted-vertex orientations).  Ranks come from bit-packed elimination
over GF2 and fraction-free (Bareiss) elimination over the rationals, so every
number reported is exact.  Torsion uses Smith normal form and is gated by a
size guard.

Disc filling implements the arc-shortening procedure: while the loop is
longer than r, the arc of r consecutive vertices starting at the smallest
vertex id is coned off to an ample witness, shortening the loop by r-3; the
final loop of length at most r is coned off in one step.  The output carries
an abstract combinatorial disc plus the map into the complex, and can
re-verify itself from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .ampleness import iter_witnesses
from .complexes import SimplicialComplex, vertices_of
from .errors import (
    AbsentSimplexError,
    InvalidParametersError,
    InvalidQueryError,
    InvalidSubcomplexError,
    MalformedSimplexError,
    NotAmpleEnoughError,
    ResourceLimitError,
)

# --------------------------------------------------------------------------
# boundary matrices


@dataclass(frozen=True)
class ChainComplexMatrices:
    """Sparse boundary maps of a complex.

    levels[d] lists the d-simplexes as vertex tuples in canonical order;
    columns[d][j] is the boundary of the j-th d-simplex as (row, sign) pairs
    into levels[d-1].  Signs alternate over the sorted vertex order, so
    composing two boundaries gives zero.
    """

    levels: Tuple[Tuple[Tuple[int, ...], ...], ...]
    columns: Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...]

    @classmethod
    def from_complex(cls, x: SimplicialComplex) -> "ChainComplexMatrices":
        levels: List[Tuple[Tuple[int, ...], ...]] = []
        columns: List[Tuple[Tuple[Tuple[int, int], ...], ...]] = []
        index_prev: Dict[int, int] = {}
        for d in range(x.dim + 1):
            masks = x.simplex_masks(d)
            levels.append(tuple(vertices_of(m) for m in masks))
            cols: List[Tuple[Tuple[int, int], ...]] = []
            if d > 0:
                for m in masks:
                    vs = vertices_of(m)
                    col = tuple(
                        (index_prev[m ^ (1 << v)], -1 if i % 2 else 1)
                        for i, v in enumerate(vs)
                    )
                    cols.append(col)
            columns.append(tuple(cols))
            index_prev = {m: i for i, m in enumerate(masks)}
        return cls(levels=tuple(levels), columns=tuple(columns))

    def dense(self, d: int) -> List[List[int]]:
        """Boundary map d as a dense row-major integer matrix.  For d beyond
        the top dimension the rows are empty (a zero map out of nothing)."""
        if d <= 0:
            return []
        rows = len(self.levels[d - 1]) if d - 1 < len(self.levels) else 0
        if d >= len(self.levels):
            return [[] for _ in range(rows)]
        mat = [[0] * len(self.levels[d]) for _ in range(rows)]
        for j, col in enumerate(self.columns[d]):
            for i, s in col:
                mat[i][j] = s
        return mat

    def gf2_columns(self, d: int) -> List[int]:
        """Boundary map d with each column packed into an integer bitmask."""
        if d <= 0 or d >= len(self.levels):
            return []
        out = []
        for col in self.columns[d]:
            m = 0
            for i, _ in col:
                m |= 1 << i
            out.append(m)
        return out


def _rank_gf2(cols: Sequence[int]) -> int:
    pivots: Dict[int, int] = {}
    for c in cols:
        while c:
            lead = c.bit_length() - 1
            if lead in pivots:
                c ^= pivots[lead]
            else:
                pivots[lead] = c
                break
    return len(pivots)


def _rank_rational(mat: List[List[int]]) -> int:
    """Rank of an integer matrix by exact elimination over the rationals."""
    rows = [[Fraction(v) for v in row] for row in mat if any(row)]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        pv = pr[c]
        for i in range(rank + 1, len(rows)):
            ri = rows[i]
            if ri[c]:
                f = ri[c] / pv
                for j in range(c, ncols):
                    ri[j] -= f * pr[j]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _integer_kernel_vector(mat: List[List[int]], ncols: int) -> Optional[List[int]]:
    """A primitive integer vector in the kernel of mat, or None.

    Gauss-Jordan over exact rationals, then the first free column yields a
    kernel basis vector, scaled to integers and divided by the gcd.
    """
    rows = [[Fraction(v) for v in row] for row in mat if any(row)]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    f0 = free[0]
    vec = [Fraction(0)] * ncols
    vec[f0] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -rows[i][f0]
    scale = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * scale) for v in vec]
    g = math.gcd(*ints)
    return [v // g for v in ints]


# --------------------------------------------------------------------------
# Betti numbers and torsion


@dataclass(frozen=True)
class BettiReport:
    """Betti numbers of a complex over one coefficient system.

    betti is unreduced (a connected complex has betti[0] == 1); reduced()
    lowers degree zero by one for connectivity work.  torsion, when present,
    lists the elementary divisors above 1 of each integral homology group.
    """

    field: str
    betti: Tuple[int, ...]
    torsion: Optional[Tuple[Tuple[int, ...], ...]] = None

    def reduced(self) -> Tuple[int, ...]:
        if not self.betti:
            return ()
        return (max(self.betti[0] - 1, 0),) + self.betti[1:]

    def to_json_obj(self) -> dict:
        obj = {"field": self.field, "betti": list(self.betti)}
        if self.torsion is not None:
            obj["torsion"] = [list(t) for t in self.torsion]
        return obj


_FIELDS = ("gf2", "rationals")


def betti_numbers(x: SimplicialComplex, field: str = "rationals") -> BettiReport:
    """Exact Betti numbers over GF2 or the rationals.

    b_d = (number of d-simplexes) - rank(boundary_d) - rank(boundary_{d+1}).
    Over the rationals the alternating sum equals the Euler characteristic.
    """
    if field not in _FIELDS:
        raise InvalidParametersError(f"field must be one of {_FIELDS}")
    if x.is_empty:
        return BettiReport(field=field, betti=())
    chain = ChainComplexMatrices.from_complex(x)
    top = x.dim
    ranks = [0] * (top + 2)
    for d in range(1, top + 1):
        if field == "gf2":
            ranks[d] = _rank_gf2(chain.gf2_columns(d))
        else:
            ranks[d] = _rank_rational(chain.dense(d))
    betti = tuple(
        len(chain.levels[d]) - ranks[d] - ranks[d + 1] for d in range(top + 1)
    )
    return BettiReport(field=field, betti=betti)


DEFAULT_TORSION_GUARD = 5000


def _smith_divisors(mat: List[List[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith normal form, each dividing the
    next."""
    m = [row[:] for row in mat]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    divisors: List[int] = []
    t = 0
    while True:
        pr = pc = None
        best = None
        for i in range(t, nr):
            row = m[i]
            for j in range(t, nc):
                v = row[j]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    pr, pc = i, j
                    if best == 1:
                        break
            if best == 1:
                break
        if pr is None:
            break
        m[t], m[pr] = m[pr], m[t]
        for row in m:
            row[t], row[pc] = row[pc], row[t]
        while True:
            # clear column t with row operations
            again = False
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        again = True
            if again:
                continue
            # clear row t with column operations
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for row in m:
                        row[j] -= q * row[t]
                    if m[t][j]:
                        for row in m:
                            row[t], row[j] = row[j], row[t]
                        again = True
            if not again:
                break
        # enforce divisibility of the remaining block
        fix = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if m[i][j] % m[t][t]:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            m[t] = [a + b for a, b in zip(m[t], m[fix])]
            continue
        divisors.append(abs(m[t][t]))
        t += 1
        if t == nr or t == nc:
            break
    return divisors


def integral_torsion(
    x: SimplicialComplex, guard: int = DEFAULT_TORSION_GUARD
) -> List[List[int]]:
    """Elementary divisors above 1 of each integral homology group, from the
    Smith normal form of the boundary maps.  Entry d describes the torsion of
    homology in dimension d; an all-empty answer means torsion-free."""
    if x.simplex_count > guard:
        raise ResourceLimitError(
            f"{x.simplex_count} simplexes exceed the torsion guard {guard}"
        )
    if x.is_empty:
        return []
    chain = ChainComplexMatrices.from_complex(x)
    out: List[List[int]] = []
    for d in range(x.dim + 1):
        if d + 1 <= x.dim:
            divs = _smith_divisors(chain.dense(d + 1))
        else:
            divs = []
        out.append([v for v in divs if v > 1])
    return out


# --------------------------------------------------------------------------
# cycles under inclusion


class CycleSurvival(NamedTuple):
    """Whether a fundamental cycle stays non-bounding, per coefficient
    system."""

    rationals: bool
    gf2: bool

    def to_json_obj(self) -> dict:
        return {"rationals": self.rationals, "gf2": self.gf2}


def _fundamental_cycle(x_sub: SimplicialComplex, dim: int) -> List[int]:
    chain = ChainComplexMatrices.from_complex(x_sub)
    ncols = len(chain.levels[dim])
    if dim == 0:
        vec = [0] * ncols
        vec[0] = 1
        return vec
    vec = _integer_kernel_vector(chain.dense(dim), ncols)
    if vec is None:
        raise InvalidQueryError(f"no fundamental {dim}-cycle: boundary map is injective")
    return vec


def cycle_survives(
    x_sub: SimplicialComplex, x: SimplicialComplex, dim: int
) -> CycleSurvival:
    """Whether the fundamental dim-cycle of x_sub is still non-bounding in x.

    The cycle is a primitive integer kernel vector of x_sub's top boundary
    map (its mod-2 reduction is the GF2 cycle).  Over each coefficient
    system the verdict is a rank test: the cycle survives exactly when
    adjoining it to the next boundary map raises the rank.
    """
    if not x_sub.is_subcomplex_of(x):
        raise InvalidSubcomplexError("cycle carrier must be a subcomplex")
    if dim != x_sub.dim:
        raise InvalidQueryError(
            f"carrier has dimension {x_sub.dim}, cycle requested in {dim}"
        )
    z_sub = _fundamental_cycle(x_sub, dim)

    big = x.simplex_masks(dim)
    index = {m: i for i, m in enumerate(big)}
    z = [0] * len(big)
    for coeff, m in zip(z_sub, x_sub.simplex_masks(dim)):
        z[index[m]] = coeff

    chain = ChainComplexMatrices.from_complex(x)
    dense = chain.dense(dim + 1)  # rows of empty width when dim is the top
    with_cycle = [row + [z[i]] for i, row in enumerate(dense)]
    rationals = _rank_rational(with_cycle) > _rank_rational(dense)

    cols2 = chain.gf2_columns(dim + 1)
    z2 = 0
    for i, v in enumerate(z):
        if v % 2:
            z2 |= 1 << i
    gf2 = _rank_gf2(cols2 + [z2]) > _rank_gf2(cols2)
    return CycleSurvival(rationals=rationals, gf2=gf2)


# --------------------------------------------------------------------------
# disc filling


def internal_vertex_bound(n: int, r: int) -> int:
    """Ceiling of (n-3)/(r-3): internal vertices a filled n-loop may use."""
    return -((n - 3) // -(r - 3))


def triangle_bound(n: int, r: int) -> int:
    """Largest triangle count of a filled n-loop: the vertex bound times
    (r-1), plus one."""
    return internal_vertex_bound(n, r) * (r - 1) + 1


@dataclass(frozen=True)
class FilledDisc:
    """A combinatorial disc filling a loop, plus its map into a complex.

    Abstract vertices 0..boundary_length-1 are the loop positions in order;
    larger ids are internal.  vertex_map sends abstract ids to vertices of
    the target complex (distinct abstract ids may share an image when the
    loop revisits a vertex).  triangles are abstract.
    """

    boundary_length: int
    ample_r: int
    vertex_map: Dict[int, int]
    triangles: Tuple[Tuple[int, int, int], ...]

    @property
    def internal_vertex_count(self) -> int:
        return len(self.vertex_map) - self.boundary_length

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def image_triangles(self) -> List[Tuple[int, ...]]:
        return [
            tuple(sorted(self.vertex_map[a] for a in t)) for t in self.triangles
        ]

    def edge_list(self) -> List[Tuple[int, int]]:
        """Abstract edges of the disc, each once, for external viewers."""
        seen = set()
        for t in self.triangles:
            for i in range(3):
                e = tuple(sorted((t[i], t[(i + 1) % 3])))
                seen.add(e)
        return sorted(seen)

    def validate(self, x: SimplicialComplex) -> None:
        """Re-verify the disc from scratch against the target complex.

        Checks that every triangle maps to a 2-simplex of x, that each
        boundary edge lies on exactly one triangle, every other edge on
        exactly two, that the Euler count V - E + T equals 1, and that the
        triangles form one connected sheet.  Raises on the first failure.
        """
        n = self.boundary_length
        ids = set(range(n))
        for t in self.triangles:
            ids.update(t)
        if set(self.vertex_map) != ids:
            raise MalformedSimplexError("vertex_map does not cover the disc")
        for t in self.triangles:
            img = {self.vertex_map[a] for a in t}
            if len(img) != 3:
                raise MalformedSimplexError(f"triangle {t} maps to {sorted(img)}")
            if not x.has_simplex(tuple(sorted(img))):
                raise AbsentSimplexError(tuple(sorted(img)))
        edge_count: Dict[Tuple[int, int], int] = {}
        for t in self.triangles:
            for i in range(3):
                e = tuple(sorted((t[i], t[(i + 1) % 3])))
                edge_count[e] = edge_count.get(e, 0) + 1
        boundary = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
        for e in boundary:
            if edge_count.get(e, 0) != 1:
                raise InvalidQueryError(
                    f"boundary edge {e} lies on {edge_count.get(e, 0)} triangles"
                )
        for e, c in edge_count.items():
            if e not in boundary and c != 2:
                raise InvalidQueryError(f"internal edge {e} lies on {c} triangles")
        euler = len(ids) - len(edge_count) + len(self.triangles)
        if euler != 1:
            raise InvalidQueryError(f"V - E + T = {euler}, disc needs 1")
        if self.triangles:
            # one connected sheet: walk triangle adjacency across shared edges
            by_edge: Dict[Tuple[int, int], List[int]] = {}
            for k, t in enumerate(self.triangles):
                for i in range(3):
                    e = tuple(sorted((t[i], t[(i + 1) % 3])))
                    by_edge.setdefault(e, []).append(k)
            seen = {0}
            frontier = [0]
            while frontier:
                k = frontier.pop()
                t = self.triangles[k]
                for i in range(3):
                    e = tuple(sorted((t[i], t[(i + 1) % 3])))
                    for other in by_edge[e]:
                        if other not in seen:
                            seen.add(other)
                            frontier.append(other)
            if len(seen) != len(self.triangles):
                raise InvalidQueryError("disc is not connected")

    def within_bounds(self) -> bool:
        return (
            self.internal_vertex_count
            <= internal_vertex_bound(self.boundary_length, self.ample_r)
            and self.triangle_count
            <= triangle_bound(self.boundary_length, self.ample_r)
        )

    def to_json_obj(self) -> dict:
        return {
            "boundary_length": self.boundary_length,
            "ample_r": self.ample_r,
            "internal_vertices": self.internal_vertex_count,
            "triangle_count": self.triangle_count,
            "internal_vertex_bound": internal_vertex_bound(
                self.boundary_length, self.ample_r
            ),
            "triangle_bound": triangle_bound(self.boundary_length, self.ample_r),
            "vertex_map": {str(k): v for k, v in sorted(self.vertex_map.items())},
            "triangles": [list(t) for t in self.triangles],
        }


def _path_complex(images: Sequence[int], close: bool) -> SimplicialComplex:
    simplexes: List[Tuple[int, ...]] = [(v,) for v in set(images)]
    pairs = len(images) if close else len(images) - 1
    for i in range(pairs):
        a, b = images[i], images[(i + 1) % len(images)]
        simplexes.append((a, b))
    return SimplicialComplex(simplexes)


def _pick_witness(
    x: SimplicialComplex,
    u_vertices: Tuple[int, ...],
    target: SimplicialComplex,
    avoid: set,
) -> int:
    """Least witness for (U, target), preferring vertices outside `avoid`
    (the current loop); falls back to the least witness overall."""
    fallback = None
    for w in iter_witnesses(x, u_vertices, target):
        if w not in avoid:
            return w
        if fallback is None:
            fallback = w
    if fallback is not None:
        return fallback
    raise NotAmpleEnoughError(
        f"no witness for U={u_vertices}; the complex is not ample enough",
        vertex_set=u_vertices,
        target_link=target,
    )


def fill_loop(x: SimplicialComplex, loop: Sequence[int], r: int) -> FilledDisc:
    """Fill a closed edge-path of length >= 4 with a simplicial disc, using
    ample witnesses of order r >= 4.

    While the loop is longer than r: take the arc of r consecutive positions
    starting at the position with the smallest vertex id, ask for a witness
    whose link cuts the arc's induced complex to exactly the arc path, and
    replace the arc's interior with the witness (r-1 new triangles, loop
    shorter by r-3).  The final loop, length between 4 and r, is coned onto
    one witness.  Internal vertices never exceed ceil((n-3)/(r-3)) and
    triangles never exceed that bound times (r-1), plus one.

    Raises NotAmpleEnoughError naming the exact (U, A) pair when a witness is
    missing; callers may extend the complex with a cone over A and retry.
    """
    if r < 4:
        raise InvalidParametersError("filling needs r >= 4")
    loop = list(loop)
    n = len(loop)
    if n < 4:
        raise InvalidQueryError(
            "loops shorter than 4 are out of scope: a 3-loop fills iff its "
            "triangle is present"
        )
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        if a == b or not x.has_simplex((a, b)):
            raise AbsentSimplexError((a, b))

    vertex_map: Dict[int, int] = {i: loop[i] for i in range(n)}
    current: List[int] = list(range(n))  # abstract ids in loop order
    triangles: List[Tuple[int, int, int]] = []
    next_id = n

    while len(current) > r:
        m = len(current)
        start = min(range(m), key=lambda i: (vertex_map[current[i]], i))
        arc = [current[(start + t) % m] for t in range(r)]
        images = [vertex_map[a] for a in arc]
        u = tuple(sorted(set(images)))
        target = _path_complex(images, close=False)
        avoid = {vertex_map[a] for a in current}
        w = _pick_witness(x, u, target, avoid)
        w_id = next_id
        next_id += 1
        vertex_map[w_id] = w
        for t in range(r - 1):
            triangles.append((arc[t], arc[t + 1], w_id))
        # the loop now reads arc[0], witness, arc[r-1], then the untouched rest
        keep = [current[(start + r - 1 + t) % m] for t in range(m - r + 1)]
        current = [arc[0], w_id] + keep

    m = len(current)
    images = [vertex_map[a] for a in current]
    u = tuple(sorted(set(images)))
    target = _path_complex(images, close=True)
    w = _pick_witness(x, u, target, set(images))
    w_id = next_id
    vertex_map[w_id] = w
    for t in range(m):
        triangles.append((current[t], current[(t + 1) % m], w_id))

    disc = FilledDisc(
        boundary_length=n,
        ample_r=r,
        vertex_map=vertex_map,
        triangles=tuple(triangles),
    )
    disc.validate(x)
    return disc


# --------------------------------------------------------------------------
# connectivity


@dataclass(frozen=True)
class ConnectivityReport:
    """Connectivity evidence for a complex.

    homological_connectivity is the largest k with vanishing reduced Betti
    numbers through dimension k over both GF2 and the rationals (capped at
    the complex's dimension; -1 when already disconnected).  The certificate,
    when present, is a tuple of validated discs filling a generating set of
    1-cycles, which upgrades degree one from homological to genuine.  caveat
    is set whenever the evidence is homological only.
    """

    homological_connectivity: int
    betti_gf2: BettiReport
    betti_rational: BettiReport
    simply_connected_certificate: Optional[Tuple[FilledDisc, ...]]
    caveat: bool

    def to_json_obj(self) -> dict:
        obj = {
            "homological_connectivity": self.homological_connectivity,
            "betti_gf2": self.betti_gf2.to_json_obj(),
            "betti_rational": self.betti_rational.to_json_obj(),
            "caveat": self.caveat,
        }
        if self.simply_connected_certificate is not None:
            obj["simply_connected_certificate"] = [
                d.to_json_obj() for d in self.simply_connected_certificate
            ]
        return obj


def _fundamental_cycles(x: SimplicialComplex) -> List[List[int]]:
    """Cycles generating the first homotopy of the 1-skeleton: one per
    non-tree edge of a breadth-first spanning tree."""
    verts = x.vertices()
    root = verts[0]
    parent: Dict[int, Optional[int]] = {root: None}
    depth = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for w in vertices_of(x.adjacency_mask(v)):
                if w not in parent:
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    nxt.append(w)
        frontier = nxt
    cycles = []
    for a, b in x.simplexes(1):
        if parent.get(a) == b or parent.get(b) == a:
            continue
        pa, pb = [a], [b]
        while depth[pa[-1]] > depth[pb[-1]]:
            pa.append(parent[pa[-1]])
        while depth[pb[-1]] > depth[pa[-1]]:
            pb.append(parent[pb[-1]])
        while pa[-1] != pb[-1]:
            pa.append(parent[pa[-1]])
            pb.append(parent[pb[-1]])
        cycles.append(pa + pb[-2::-1])
    return cycles


def _triangle_disc(x: SimplicialComplex, cycle: List[int], r: int) -> FilledDisc:
    """Disc for a 3-cycle: the filled triangle when present, otherwise a cone
    onto a witness."""
    tri = tuple(sorted(cycle))
    vertex_map = {i: cycle[i] for i in range(3)}
    if x.has_simplex(tri):
        return FilledDisc(
            boundary_length=3, ample_r=r, vertex_map=vertex_map,
            triangles=((0, 1, 2),),
        )
    u = tuple(sorted(set(cycle)))
    target = _path_complex(cycle, close=True)
    w = _pick_witness(x, u, target, set(cycle))
    vertex_map[3] = w
    return FilledDisc(
        boundary_length=3, ample_r=r, vertex_map=vertex_map,
        triangles=((0, 1, 3), (1, 2, 3), (2, 0, 3)),
    )


def connectivity_report(
    x: SimplicialComplex, verified_ample_r: Optional[int] = None
) -> ConnectivityReport:
    """Homological connectivity over both coefficient systems, plus a
    constructive simple-connectivity certificate when the caller has verified
    ampleness of order at least 4.

    The certificate fills the fundamental cycles of a spanning tree of the
    1-skeleton; if every generating cycle bounds a disc the fundamental group
    is trivial.  When no certificate is attempted or a witness is missing,
    the caveat flag records that degree-one evidence is homological only.
    """
    bg = betti_numbers(x, "gf2")
    bq = betti_numbers(x, "rationals")
    if x.is_empty:
        return ConnectivityReport(
            homological_connectivity=-1,
            betti_gf2=bg,
            betti_rational=bq,
            simply_connected_certificate=None,
            caveat=True,
        )
    rg, rq = bg.reduced(), bq.reduced()
    conn = -1
    for d in range(x.dim + 1):
        if rg[d] == 0 and rq[d] == 0:
            conn = d
        else:
            break

    certificate = None
    caveat = True
    if (
        verified_ample_r is not None
        and verified_ample_r >= 4
        and conn >= 0
        and x.dim >= 1
    ):
        discs = []
        try:
            for cycle in _fundamental_cycles(x):
                if len(cycle) == 3:
                    disc = _triangle_disc(x, cycle, verified_ample_r)
                else:
                    disc = fill_loop(x, cycle, verified_ample_r)
                disc.validate(x)
                discs.append(disc)
        except NotAmpleEnoughError:
            certificate = None
        else:
            certificate = tuple(discs)
            caveat = False
    return ConnectivityReport(
        homological_connectivity=conn,
        betti_gf2=bg,
        betti_rational=bq,
        simply_connected_certificate=certificate,
        caveat=caveat,
    )


# --------------------------------------------------------------------------
# topological-complexity arithmetic


def dimension_threshold(n: int) -> float:
    """Window center beta = log2(n) + log2(log2(n * ln 2)) for the dimension
    of a medial sample on ambient size n.

    The expected-dimension window used by the statistics harness is
    [floor(beta) - 1, beta - 1 + epsilon] with epsilon = 1.  Computed in log
    space so arbitrarily large integer n never overflows a float.
    """
    if n < 3:
        raise InvalidParametersError("dimension window needs n >= 3")
    log_n = math.log2(n)
    return log_n + math.log2(log_n + math.log2(math.log(2.0)))


def tc_upper_bound(dim: int, conn: int) -> int:
    """Largest integer strictly below (2*dim + 1)/(conn + 1), which equals
    floor(2*dim/(conn + 1)) in exact integer arithmetic (one less than the
    ratio when the ratio is itself an integer)."""
    if dim < 0 or conn < 0:
        raise InvalidParametersError("dim and conn must be >= 0")
    return (2 * dim) // (conn + 1)


class MedialTcBounds(NamedTuple):
    dim_bound: int
    conn_bound: int
    tc_bound: int


def medial_tc_calculator(L: float) -> MedialTcBounds:
    """Topological-complexity bound for a typical medial random complex whose
    ambient size n is given through L = log2 log2 n.

    Dimension: at most beta - 1 + epsilon with beta = L + log2(L + log2 ln 2)
    and epsilon below one, so the integer dimension bound is floor(beta).
    Connectivity: L/2 - 3, floored.  The bound is the largest integer
    strictly below (2*dim + 1)/(conn + 1).

    The conclusion "at most 4" is asymptotic: L = 100 gives 4, but L = 40
    (already n = 2**(2**40)) still gives 5 because the dimension term's
    logarithmic correction has not yet been absorbed.  Inputs need L > 8 so
    the connectivity bound stays positive.
    """
    if L <= 8:
        raise InvalidParametersError(
            "out of regime: need L > 8 so the connectivity bound is >= 1"
        )
    beta = L + math.log2(L + math.log2(math.log(2.0)))
    dim_bound = math.floor(beta)
    conn_bound = math.floor(L / 2 - 3)
    return MedialTcBounds(
        dim_bound=dim_bound,
        conn_bound=conn_bound,
        tc_bound=tc_upper_bound(dim_bound, conn_bound),
    )
