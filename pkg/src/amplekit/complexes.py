"""Finite abstract simplicial complexes with explicit simplex storage.

A complex stores every simplex of every dimension, not only the maximal
ones, because the verdict engines downstream are dominated by membership
tests.  Each simplex is an int bitmask over vertex ids (bit v set means
vertex v belongs to the simplex), so subset, intersection and union tests
are single machine-word operations for small complexes and stay cheap for
large ones.  Python ints double as variable-width bitsets, which removes
the need for a fixed vertex cap; construction budgets elsewhere guard
memory instead.

Canonical order everywhere: simplexes sort by (dimension, vertex tuple),
and every iterator in this module follows it.  That makes witnesses,
counterexamples and serialized files deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .errors import (
    AbsentSimplexError,
    AbsentVertexError,
    IdCollisionError,
    InvalidQueryError,
    MalformedSimplexError,
    ResourceLimitError,
)

__all__ = [
    "AmbientContext",
    "SimplicialComplex",
    "cone",
    "enumerate_subcomplexes",
    "external_simplexes",
    "from_json_obj",
    "from_text",
    "is_isomorphic",
    "join",
    "mask_of",
    "read_complex",
    "to_json_obj",
    "to_text",
    "vertices_of",
    "write_complex",
]


def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask of a vertex set.  Rejects duplicates and negative ids."""
    m = 0
    count = 0
    for v in vertices:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise MalformedSimplexError(f"vertex ids must be non-negative integers, got {v!r}")
        m |= 1 << v
        count += 1
    if m.bit_count() != count:
        raise MalformedSimplexError("duplicate vertex inside one simplex")
    return m


def vertices_of(mask: int) -> Tuple[int, ...]:
    """Sorted vertex tuple of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _submasks(mask: int) -> Iterator[int]:
    """All non-empty submasks of mask, the mask itself included."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class AmbientContext:
    """The ambient vertex universe against which external simplexes are counted."""

    vertex_mask: int

    @classmethod
    def standard(cls, n: int) -> "AmbientContext":
        """Universe {0, ..., n-1}."""
        if n < 0:
            raise InvalidQueryError("ambient size must be non-negative")
        return cls((1 << n) - 1)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "AmbientContext":
        return cls(mask_of(vertices))

    def vertices(self) -> Tuple[int, ...]:
        return vertices_of(self.vertex_mask)

    def contains_complex(self, complex_: "SimplicialComplex") -> bool:
        return complex_._vmask & ~self.vertex_mask == 0


class SimplicialComplex:
    """Immutable downward-closed family of non-empty vertex sets.

    Construct from any generating family; the closure is taken.  The empty
    complex (no vertices at all) is allowed and is distinct from "a complex
    with vertices but no edges".
    """

    __slots__ = ("_levels", "_set", "_vmask", "_adj")

    def __init__(self, simplexes: Iterable[Iterable[int]] = ()):
        masks = set()
        for s in simplexes:
            m = mask_of(s)
            if m == 0:
                raise MalformedSimplexError("the empty vertex set is not a simplex")
            if m not in masks:
                masks.update(_submasks(m))
        self._finish(masks)

    @classmethod
    def _from_closed_masks(cls, masks: Iterable[int]) -> "SimplicialComplex":
        """Trusted constructor: masks must already be downward closed."""
        obj = object.__new__(cls)
        obj._finish(set(masks))
        return obj

    def _finish(self, masks: set) -> None:
        levels: Dict[int, List[int]] = {}
        for m in masks:
            levels.setdefault(m.bit_count() - 1, []).append(m)
        for d in levels:
            levels[d].sort(key=vertices_of)
        vmask = 0
        for m in levels.get(0, ()):
            vmask |= m
        adj: Dict[int, int] = {v: 0 for v in _iter_bits(vmask)}
        for m in levels.get(1, ()):
            a, b = vertices_of(m)
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        self._levels = {d: tuple(ms) for d, ms in sorted(levels.items())}
        self._set = frozenset(masks)
        self._vmask = vmask
        self._adj = adj

    # ------------------------------------------------------------------ basic queries

    @property
    def is_empty(self) -> bool:
        return not self._set

    @property
    def dim(self) -> int:
        """Largest simplex dimension, -1 for the empty complex."""
        return max(self._levels) if self._levels else -1

    @property
    def vertex_count(self) -> int:
        return self._vmask.bit_count()

    @property
    def simplex_count(self) -> int:
        return len(self._set)

    def vertices(self) -> Tuple[int, ...]:
        return vertices_of(self._vmask)

    def vertex_mask(self) -> int:
        return self._vmask

    def has_vertex(self, v: int) -> bool:
        return bool(self._vmask >> v & 1) if v >= 0 else False

    def has_simplex(self, simplex: Iterable[int]) -> bool:
        return mask_of(simplex) in self._set

    def _has_mask(self, mask: int) -> bool:
        return mask in self._set

    def __contains__(self, simplex: Iterable[int]) -> bool:
        return self.has_simplex(simplex)

    def simplexes(self, dim: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
        """Simplexes as sorted vertex tuples, canonical (dim, lex) order."""
        if dim is None:
            for d in self._levels:
                for m in self._levels[d]:
                    yield vertices_of(m)
        else:
            for m in self._levels.get(dim, ()):
                yield vertices_of(m)

    def simplex_masks(self, dim: Optional[int] = None) -> Tuple[int, ...]:
        """Masks at one dimension (canonical order), or all dimensions concatenated."""
        if dim is not None:
            return self._levels.get(dim, ())
        out: List[int] = []
        for d in self._levels:
            out.extend(self._levels[d])
        return tuple(out)

    def adjacency_mask(self, v: int) -> int:
        """Bitmask of neighbors of v in the 1-skeleton."""
        if not self.has_vertex(v):
            raise AbsentVertexError(v)
        return self._adj[v]

    def f_vector(self) -> Tuple[int, ...]:
        """Simplex counts by dimension, empty tuple for the empty complex."""
        if not self._levels:
            return ()
        top = max(self._levels)
        return tuple(len(self._levels.get(d, ())) for d in range(top + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(ms) for d, ms in self._levels.items())

    def maximal_simplexes(self) -> List[Tuple[int, ...]]:
        """Simplexes with no proper coface, sorted lexicographically by vertex tuple."""
        out = []
        for d, ms in self._levels.items():
            above = self._levels.get(d + 1, ())
            for m in ms:
                if not any(a & m == m for a in above):
                    out.append(vertices_of(m))
        out.sort()
        return out

    # ------------------------------------------------------------------ derived complexes

    def link(self, simplex: Iterable[int]) -> "SimplicialComplex":
        """Link of a simplex: all tau disjoint from it with tau + simplex present."""
        s = mask_of(simplex)
        if s == 0:
            raise InvalidQueryError("link of the empty set is the whole complex; pass a simplex")
        if s not in self._set:
            raise AbsentSimplexError(vertices_of(s))
        masks = [m ^ s for m in self._set if m & s == s and m != s]
        return SimplicialComplex._from_closed_masks(masks)

    def closed_star(self, v: int) -> "SimplicialComplex":
        """Closed star of a vertex: all tau with tau + {v} present."""
        if not self.has_vertex(v):
            raise AbsentVertexError(v)
        bit = 1 << v
        masks = [m for m in self._set if (m | bit) in self._set]
        return SimplicialComplex._from_closed_masks(masks)

    def induced(self, vertices: Iterable[int]) -> "SimplicialComplex":
        """Induced subcomplex on a vertex subset (must be vertices of the complex)."""
        u = mask_of(vertices)
        if u & ~self._vmask:
            raise AbsentVertexError(vertices_of(u & ~self._vmask))
        keep = ~u
        masks = [m for m in self._set if m & keep == 0]
        return SimplicialComplex._from_closed_masks(masks)

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self._set <= other._set

    # ------------------------------------------------------------------ dunder plumbing

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return (
            f"SimplicialComplex(vertices={self.vertex_count}, "
            f"simplexes={self.simplex_count}, dim={self.dim})"
        )


def join(x: SimplicialComplex, y: SimplicialComplex) -> SimplicialComplex:
    """Simplicial join.  Vertex id sets must be disjoint (relabel beforehand)."""
    if x._vmask & y._vmask:
        raise IdCollisionError(vertices_of(x._vmask & y._vmask))
    masks = set(x._set)
    masks.update(y._set)
    masks.update(a | b for a in x._set for b in y._set)
    return SimplicialComplex._from_closed_masks(masks)


def cone(apex: int, base: SimplicialComplex) -> SimplicialComplex:
    """Cone with a fresh apex over a base complex (apex must not be a base vertex)."""
    if base.has_vertex(apex):
        raise IdCollisionError([apex])
    bit = 1 << apex
    masks = set(base._set)
    masks.add(bit)
    masks.update(m | bit for m in base._set)
    return SimplicialComplex._from_closed_masks(masks)


def relabeled(x: SimplicialComplex, offset: int) -> SimplicialComplex:
    """Copy of x with every vertex id shifted by a non-negative offset."""
    if offset < 0:
        raise InvalidQueryError("offset must be non-negative")
    return SimplicialComplex._from_closed_masks(m << offset for m in x._set)


def external_simplexes(
    x: SimplicialComplex, ambient: AmbientContext, max_dim: Optional[int] = None
) -> List[Tuple[int, ...]]:
    """Simplexes absent from x whose full boundary lies in x, within the ambient universe.

    The boundary of a vertex is the empty complex, so every ambient vertex
    missing from x is external.  An external simplex of dimension d >= 1 has
    all d+1 facets in x, hence d <= dim(x) + 1; max_dim only lowers that cap.
    """
    if x._vmask & ~ambient.vertex_mask:
        raise InvalidQueryError("complex has vertices outside the ambient universe")
    cap = x.dim + 1
    if max_dim is not None:
        cap = min(cap, max_dim)
    missing = ambient.vertex_mask & ~x._vmask
    result = [(b,) for b in _iter_bits(missing)] if cap >= 0 else []
    seen = set()
    for d in range(1, cap + 1):
        below = x._levels.get(d - 1, ())
        for tau in below:
            candidates = ambient.vertex_mask & ~tau
            for v in _iter_bits(candidates):
                m = tau | (1 << v)
                if m in seen or m in x._set:
                    continue
                seen.add(m)
                if all((m ^ (1 << u)) in x._set for u in _iter_bits(m)):
                    result.append(vertices_of(m))
    result.sort(key=lambda t: (len(t), t))
    return result


def enumerate_subcomplexes(x: SimplicialComplex) -> Iterator[SimplicialComplex]:
    """All subcomplexes of x, the empty one included, in canonical order.

    Order is lexicographic on the sorted simplex list (simplexes compared by
    dimension then vertex tuple).  Emission is a prefix DFS: a simplex may be
    appended only when all its facets are already in, so every emitted family
    is downward closed and each is emitted exactly once.
    """
    elems = x.simplex_masks()
    n = len(elems)
    facets = []
    for m in elems:
        if m.bit_count() == 1:
            facets.append(())
        else:
            facets.append(tuple(m ^ (1 << v) for v in _iter_bits(m)))
    chosen: set = set()
    stack: List[int] = []

    def emit() -> SimplicialComplex:
        return SimplicialComplex._from_closed_masks(chosen)

    def walk(start: int) -> Iterator[SimplicialComplex]:
        yield emit()
        for i in range(start, n):
            m = elems[i]
            if all(f in chosen for f in facets[i]):
                chosen.add(m)
                yield from walk(i + 1)
                chosen.discard(m)

    return walk(0)


def count_subcomplexes(x: SimplicialComplex) -> int:
    """Number of subcomplexes of x without materializing them."""
    elems = x.simplex_masks()
    n = len(elems)
    facets = [tuple(m ^ (1 << v) for v in _iter_bits(m)) if m.bit_count() > 1 else () for m in elems]
    chosen: set = set()

    def walk(start: int) -> int:
        total = 1
        for i in range(start, n):
            if all(f in chosen for f in facets[i]):
                chosen.add(elems[i])
                total += walk(i + 1)
                chosen.discard(elems[i])
        return total

    return walk(0)


# ---------------------------------------------------------------------- isomorphism


def _vertex_invariant(x: SimplicialComplex, v: int):
    star_sizes = {}
    bit = 1 << v
    for m in x._set:
        if m & bit:
            d = m.bit_count() - 1
            star_sizes[d] = star_sizes.get(d, 0) + 1
    return tuple(sorted(star_sizes.items()))


def is_isomorphic(
    x: SimplicialComplex, y: SimplicialComplex, max_vertices: int = 20, force: bool = False
) -> Optional[Dict[int, int]]:
    """Simplex-preserving vertex bijection from x to y, or None.

    Plain backtracking over vertex assignments with per-vertex star-profile
    pruning; guarded to max_vertices vertices unless force is given.
    """
    if max(x.vertex_count, y.vertex_count) > max_vertices and not force:
        raise ResourceLimitError(
            f"isomorphism search guarded to {max_vertices} vertices; pass force=True"
        )
    if x.vertex_count != y.vertex_count or x.f_vector() != y.f_vector():
        return None
    xs = list(x.vertices())
    ys = list(y.vertices())
    inv_x = {v: _vertex_invariant(x, v) for v in xs}
    inv_y = {w: _vertex_invariant(y, w) for w in ys}
    if sorted(inv_x.values()) != sorted(inv_y.values()):
        return None
    # Assign rare invariants first to fail fast.
    from collections import Counter

    freq = Counter(inv_x.values())
    xs.sort(key=lambda v: (freq[inv_x[v]], v))

    assignment: Dict[int, int] = {}
    used = set()

    def consistent(v: int, w: int) -> bool:
        # Check every simplex among already-assigned vertices that involves v,
        # in both directions.
        dom_mask = 0
        for a in assignment:
            dom_mask |= 1 << a
        vbit = 1 << v
        for m in x._set:
            if m & vbit and m & ~(dom_mask | vbit) == 0:
                img = 0
                for u in _iter_bits(m):
                    img |= 1 << (w if u == v else assignment[u])
                if img not in y._set:
                    return False
        img_mask = (1 << w)
        for a, b in assignment.items():
            img_mask |= 1 << b
        backmap = {b: a for a, b in assignment.items()}
        backmap[w] = v
        wbit = 1 << w
        for m in y._set:
            if m & wbit and m & ~img_mask == 0:
                pre = 0
                for u in _iter_bits(m):
                    pre |= 1 << backmap[u]
                if pre not in x._set:
                    return False
        return True

    def backtrack(i: int) -> bool:
        if i == len(xs):
            return True
        v = xs[i]
        for w in ys:
            if w in used or inv_y[w] != inv_x[v]:
                continue
            if consistent(v, w):
                assignment[v] = w
                used.add(w)
                if backtrack(i + 1):
                    return True
                del assignment[v]
                used.discard(w)
        return False

    return dict(assignment) if backtrack(0) else None


# ---------------------------------------------------------------------- serialization

# Text format: first line "vertices <n>" where n is one past the largest
# vertex id (0 for the empty complex); one line per maximal simplex, vertex
# ids space-separated ascending, lines sorted lexicographically as tuples.
# The structured format is the same data as a JSON object.


def to_text(x: SimplicialComplex) -> str:
    n = x._vmask.bit_length()
    lines = [f"vertices {n}"]
    for t in x.maximal_simplexes():
        lines.append(" ".join(str(v) for v in t))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> SimplicialComplex:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("vertices "):
        raise MalformedSimplexError("first line must be 'vertices <n>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise MalformedSimplexError("unreadable vertex count") from exc
    maximal = []
    for ln in lines[1:]:
        try:
            t = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise MalformedSimplexError(f"unreadable simplex line: {ln!r}") from exc
        if t != sorted(t):
            raise MalformedSimplexError(f"simplex line not ascending: {ln!r}")
        if t and t[-1] >= n:
            raise MalformedSimplexError(f"vertex id {t[-1]} outside declared range {n}")
        maximal.append(t)
    return SimplicialComplex(maximal)


def to_json_obj(x: SimplicialComplex) -> dict:
    return {
        "vertices": x._vmask.bit_length(),
        "maximal_simplices": [list(t) for t in x.maximal_simplexes()],
    }


def from_json_obj(obj: dict) -> SimplicialComplex:
    if not isinstance(obj, dict) or "maximal_simplices" not in obj or "vertices" not in obj:
        raise MalformedSimplexError("expected keys 'vertices' and 'maximal_simplices'")
    n = obj["vertices"]
    if not isinstance(n, int) or n < 0:
        raise MalformedSimplexError("'vertices' must be a non-negative integer")
    maximal = obj["maximal_simplices"]
    for t in maximal:
        if not isinstance(t, list) or t != sorted(t):
            raise MalformedSimplexError(f"simplex {t!r} must be an ascending list")
        if t and t[-1] >= n:
            raise MalformedSimplexError(f"vertex id {t[-1]} outside declared range {n}")
    return SimplicialComplex(maximal)


def write_complex(x: SimplicialComplex, path: str, fmt: Optional[str] = None) -> None:
    """Write to a file; fmt is 'text' or 'structured', default by .json extension."""
    if fmt is None:
        fmt = "structured" if str(path).endswith(".json") else "text"
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == "structured":
            json.dump(to_json_obj(x), fh, sort_keys=True, indent=2)
            fh.write("\n")
        elif fmt == "text":
            fh.write(to_text(x))
        else:
            raise InvalidQueryError(f"unknown format {fmt!r}")


def read_complex(path: str, fmt: Optional[str] = None) -> SimplicialComplex:
    if fmt is None:
        fmt = "structured" if str(path).endswith(".json") else "text"
    with open(path, "r", encoding="utf-8") as fh:
        data = fh.read()
    if fmt == "structured":
        return from_json_obj(json.loads(data))
    if fmt == "text":
        return from_text(data)
    raise InvalidQueryError(f"unknown format {fmt!r}")
