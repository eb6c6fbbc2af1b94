"""Verdict engines for ampleness and conicity, plus the Dedekind counters.

A complex is r-ample when for every vertex subset U with |U| <= r and every
subcomplex A of the induced complex X_U there is a vertex v outside U whose
link meets X_U in exactly A.  The engine inverts the quantifiers: for a fixed
U it computes the restricted-link fingerprint of every candidate vertex once,
then looks each A up by hash instead of rescanning vertices per A.

A complex is r-conic when every subcomplex spanning at most r vertices lies
inside some closed vertex star; checking the induced complexes X_U suffices.

All iteration is in canonical order (vertex subsets by size then lex, target
subcomplexes by sorted simplex list), so counterexamples and witnesses are
deterministic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from .complexes import (
    SimplicialComplex,
    enumerate_subcomplexes,
    mask_of,
    vertices_of,
    _iter_bits,
)
from .errors import (
    AbsentVertexError,
    InvalidEmbeddingError,
    InvalidParametersError,
    InvalidQueryError,
    InvalidSubcomplexError,
    ResourceLimitError,
)

__all__ = [
    "AmpleVerdict",
    "ConicVerdict",
    "ample_witness",
    "dedekind_reduced",
    "extend_embedding",
    "is_r_ample",
    "is_r_conic",
    "iter_witnesses",
    "link_restricted",
    "max_ampleness",
    "max_conicity",
    "min_vertices_for_ample",
    "stars_intersection",
]

AMPLE_R_GUARD = 4


@dataclass
class AmpleVerdict:
    """Outcome of an r-ampleness check.

    counterexample is the first (U, A) pair in canonical order with no
    witness; witness_table (optional) records the least witness for every
    checked pair.
    """

    result: str
    r: int
    counterexample: Optional[Tuple[Tuple[int, ...], SimplicialComplex]] = None
    witness_table: Optional[List[dict]] = None
    elapsed: float = 0.0

    @property
    def is_ample(self) -> bool:
        return self.result == "ample"

    def to_json_obj(self) -> dict:
        obj = {"result": self.result, "r": self.r}
        if self.counterexample is not None:
            u, a = self.counterexample
            obj["counterexample"] = {
                "u": list(u),
                "a_maximal_simplices": [list(t) for t in a.maximal_simplexes()],
            }
        if self.witness_table is not None:
            obj["witness_table"] = self.witness_table
        return obj


@dataclass
class ConicVerdict:
    """Outcome of an r-conicity check; counterexample is the first bad U."""

    result: str
    r: int
    counterexample: Optional[Tuple[int, ...]] = None
    elapsed: float = 0.0

    @property
    def is_conic(self) -> bool:
        return self.result == "conic"

    def to_json_obj(self) -> dict:
        obj = {"result": self.result, "r": self.r}
        if self.counterexample is not None:
            obj["counterexample"] = {"u": list(self.counterexample)}
        return obj


# ---------------------------------------------------------------------- links


def link_restricted(x: SimplicialComplex, v: int, u_vertices) -> SimplicialComplex:
    """Link of v intersected with the induced complex on u_vertices."""
    umask = mask_of(u_vertices)
    if umask & ~x.vertex_mask():
        raise AbsentVertexError(vertices_of(umask & ~x.vertex_mask()))
    if not x.has_vertex(v):
        raise AbsentVertexError(v)
    if umask >> v & 1:
        raise InvalidQueryError("v must lie outside the restriction set")
    vbit = 1 << v
    masks = [m for m in x._set if m & ~umask == 0 and (m | vbit) in x._set]
    return SimplicialComplex._from_closed_masks(masks)


def _pattern(x: SimplicialComplex, vbit: int, xu_masks) -> frozenset:
    xset = x._set
    return frozenset(m for m in xu_masks if (m | vbit) in xset)


def _validate_pair(x: SimplicialComplex, u_vertices, a: SimplicialComplex):
    umask = mask_of(u_vertices)
    if umask & ~x.vertex_mask():
        raise AbsentVertexError(vertices_of(umask & ~x.vertex_mask()))
    for m in a._set:
        if m & ~umask:
            raise InvalidSubcomplexError("target complex has vertices outside U")
        if m not in x._set:
            raise InvalidSubcomplexError(
                f"target complex is not a subcomplex of the induced complex: {vertices_of(m)}"
            )
    return umask


def iter_witnesses(x: SimplicialComplex, u_vertices, a: SimplicialComplex) -> Iterator[int]:
    """All vertices v outside U with link_restricted(x, v, U) == a, ascending."""
    umask = _validate_pair(x, u_vertices, a)
    xu_masks = [m for m in x._set if m & ~umask == 0]
    aset = a._set
    xset = x._set
    for v in vertices_of(x.vertex_mask() & ~umask):
        vbit = 1 << v
        if all(((m | vbit) in xset) == (m in aset) for m in xu_masks):
            yield v


def ample_witness(x: SimplicialComplex, u_vertices, a: SimplicialComplex) -> Optional[int]:
    """Least witness vertex for the pair (U, a), or None."""
    return next(iter_witnesses(x, u_vertices, a), None)


# ---------------------------------------------------------------------- ample engine


def _ample_failure_at_size(
    x: SimplicialComplex, k: int, records: Optional[List[dict]]
) -> Optional[Tuple[Tuple[int, ...], SimplicialComplex]]:
    """First witness-free (U, A) with |U| == k, canonical order, or None."""
    verts = x.vertices()
    if k == 0:
        if not verts:
            return ((), SimplicialComplex())
        if records is not None:
            records.append({"u": [], "a": [], "witness": verts[0]})
        return None
    xset = x._set
    vmask = x.vertex_mask()
    for u in combinations(verts, k):
        umask = mask_of(u)
        xu_masks = [m for m in xset if m & ~umask == 0]
        first_by_pattern: Dict[frozenset, int] = {}
        for v in vertices_of(vmask & ~umask):
            key = _pattern(x, 1 << v, xu_masks)
            if key not in first_by_pattern:
                first_by_pattern[key] = v
        xu = SimplicialComplex._from_closed_masks(xu_masks)
        for a in enumerate_subcomplexes(xu):
            w = first_by_pattern.get(a._set)
            if w is None:
                return (u, a)
            if records is not None:
                records.append(
                    {
                        "u": list(u),
                        "a": [list(t) for t in a.maximal_simplexes()],
                        "witness": w,
                    }
                )
    return None


def _edge_third_vertex_masks(x: SimplicialComplex) -> Dict[int, int]:
    """For each edge mask, the bitmask of vertices completing it to a triangle."""
    tri: Dict[int, int] = {}
    for m in x.simplex_masks(2):
        for v in _iter_bits(m):
            e = m ^ (1 << v)
            tri[e] = tri.get(e, 0) | (1 << v)
    return tri


def _ample_failure_fast(
    x: SimplicialComplex, k: int
) -> Optional[Tuple[Tuple[int, ...], SimplicialComplex]]:
    """Bit-parallel equivalent of _ample_failure_at_size for k <= 2.

    For a pair U = {a, b} every candidate link fingerprint is one of at most
    five sets, and the witnesses of each are a boolean combination of the
    adjacency masks of a and b plus the triangle-completion mask of the edge,
    so each check is a handful of word operations instead of a vertex loop.
    """
    verts = x.vertices()
    vmask = x.vertex_mask()
    if k == 0:
        return ((), SimplicialComplex()) if not verts else None
    if k == 1:
        for u in verts:
            ubit = 1 << u
            adj = x.adjacency_mask(u)
            if vmask & ~adj & ~ubit == 0:
                return ((u,), SimplicialComplex())
            if adj == 0:
                return ((u,), SimplicialComplex([(u,)]))
        return None
    tri = _edge_third_vertex_masks(x)
    xset = x._set
    for a, b in combinations(verts, 2):
        abits = (1 << a) | (1 << b)
        adj_a = x.adjacency_mask(a)
        adj_b = x.adjacency_mask(b)
        pool = vmask & ~abits
        if pool & ~adj_a & ~adj_b == 0:
            return ((a, b), SimplicialComplex())
        if pool & adj_a & ~adj_b == 0:
            return ((a, b), SimplicialComplex([(a,)]))
        if abits in xset:
            t = tri.get(abits, 0)
            if pool & adj_a & adj_b & ~t == 0:
                return ((a, b), SimplicialComplex([(a,), (b,)]))
            if t == 0:
                return ((a, b), SimplicialComplex([(a, b)]))
        else:
            if pool & adj_a & adj_b == 0:
                return ((a, b), SimplicialComplex([(a,), (b,)]))
        if pool & adj_b & ~adj_a == 0:
            return ((a, b), SimplicialComplex([(b,)]))
    return None


def is_r_ample(
    x: SimplicialComplex,
    r: int,
    force: bool = False,
    record_witnesses: bool = False,
    use_fast_path: bool = True,
) -> AmpleVerdict:
    """Check r-ampleness by witness search; see the module docstring for the order.

    Guarded to r <= 4 by default because the subcomplex space per U grows as
    the reduced Dedekind numbers; pass force=True for r = 5 and beyond.
    """
    if r < 0:
        raise InvalidParametersError("r must be non-negative")
    if r > AMPLE_R_GUARD and not force:
        raise ResourceLimitError(
            f"r = {r} exceeds the default guard {AMPLE_R_GUARD}; pass force=True"
        )
    start = time.perf_counter()
    records: Optional[List[dict]] = [] if record_witnesses else None
    for k in range(0, min(r, x.vertex_count) + 1 if x.vertex_count else 1):
        if records is None and use_fast_path and k <= 2:
            failure = _ample_failure_fast(x, k)
        else:
            failure = _ample_failure_at_size(x, k, records)
        if failure is not None:
            return AmpleVerdict(
                "not_ample", r, counterexample=failure, elapsed=time.perf_counter() - start
            )
    return AmpleVerdict(
        "ample", r, witness_table=records, elapsed=time.perf_counter() - start
    )


def max_ampleness(x: SimplicialComplex, r_cap: int = AMPLE_R_GUARD, force: bool = False) -> int:
    """Largest r <= r_cap for which x is r-ample (0 if not even 1-ample)."""
    if r_cap > AMPLE_R_GUARD and not force:
        raise ResourceLimitError(
            f"r_cap = {r_cap} exceeds the default guard {AMPLE_R_GUARD}; pass force=True"
        )
    if x.is_empty:
        return 0
    for k in range(0, min(r_cap, x.vertex_count) + 1):
        failure = _ample_failure_fast(x, k) if k <= 2 else _ample_failure_at_size(x, k, None)
        if failure is not None:
            return k - 1 if k else 0
    return r_cap


# ---------------------------------------------------------------------- conic engine


def _conic_failure_at_size(x: SimplicialComplex, k: int) -> Optional[Tuple[int, ...]]:
    verts = x.vertices()
    if k == 0:
        return () if not verts else None
    xset = x._set
    vmask = x.vertex_mask()
    for u in combinations(verts, k):
        umask = mask_of(u)
        xu_masks = [m for m in xset if m & ~umask == 0]
        cand = vmask
        for uu in u:
            cand &= x.adjacency_mask(uu) | (1 << uu)
        found = False
        for v in _iter_bits(cand):
            vbit = 1 << v
            if all((m | vbit) in xset for m in xu_masks):
                found = True
                break
        if not found:
            return u
    return None


def is_r_conic(x: SimplicialComplex, r: int) -> ConicVerdict:
    """Check whether every induced complex on <= r vertices sits in a closed star."""
    if r < 0:
        raise InvalidParametersError("r must be non-negative")
    start = time.perf_counter()
    for k in range(0, min(r, x.vertex_count) + 1 if x.vertex_count else 1):
        failure = _conic_failure_at_size(x, k)
        if failure is not None:
            return ConicVerdict(
                "not_conic", r, counterexample=failure, elapsed=time.perf_counter() - start
            )
    return ConicVerdict("conic", r, elapsed=time.perf_counter() - start)


def max_conicity(x: SimplicialComplex, r_cap: int) -> int:
    """Largest r <= r_cap passing the conic check; -1 for the empty complex."""
    if x.is_empty:
        return -1
    for k in range(0, min(r_cap, x.vertex_count) + 1):
        if _conic_failure_at_size(x, k) is not None:
            return k - 1
    return r_cap


# ---------------------------------------------------------------------- extension


def stars_intersection(x: SimplicialComplex, vertices) -> SimplicialComplex:
    """Intersection of the closed stars of the given vertices."""
    vs = list(vertices)
    if not vs:
        raise InvalidQueryError("need at least one vertex")
    if len(set(vs)) != len(vs):
        raise InvalidQueryError("vertices must be distinct")
    for v in vs:
        if not x.has_vertex(v):
            raise AbsentVertexError(v)
    bits = [1 << v for v in vs]
    xset = x._set
    masks = [m for m in xset if all((m | b) in xset for b in bits)]
    return SimplicialComplex._from_closed_masks(masks)


def extend_embedding(
    x: SimplicialComplex,
    a: SimplicialComplex,
    b_vertices,
    f_b: Dict[int, int],
) -> Optional[Dict[int, int]]:
    """Extend an induced embedding of A's subcomplex B to all of A, or None.

    b_vertices spans B as an induced subcomplex of A; f_b maps it onto an
    induced subcomplex of x.  New vertices are placed in ascending id order,
    each via an ample witness for its link among the already-placed part, so
    on an r-ample x the extension always succeeds when A has at most r+1
    vertices.
    """
    bmask = mask_of(b_vertices)
    if bmask & ~a.vertex_mask():
        raise AbsentVertexError(vertices_of(bmask & ~a.vertex_mask()))
    if set(f_b) != set(vertices_of(bmask)):
        raise InvalidEmbeddingError("map domain must be exactly b_vertices")
    images = list(f_b.values())
    if len(set(images)) != len(images):
        raise InvalidEmbeddingError("map must be injective")
    img_mask = mask_of(images)
    if img_mask & ~x.vertex_mask():
        raise InvalidEmbeddingError("image vertices missing from the target complex")

    def image_of(mask: int, mapping: Dict[int, int]) -> int:
        out = 0
        for v in _iter_bits(mask):
            out |= 1 << mapping[v]
        return out

    b_masks = [m for m in a._set if m & ~bmask == 0]
    x_img_count = sum(1 for m in x._set if m & ~img_mask == 0)
    for m in b_masks:
        if image_of(m, f_b) not in x._set:
            raise InvalidEmbeddingError("map does not preserve simplexes")
    if len(b_masks) != x_img_count:
        raise InvalidEmbeddingError("image is not an induced copy of B")

    mapping = dict(f_b)
    placed_mask = bmask
    for w in vertices_of(a.vertex_mask() & ~bmask):
        wbit = 1 << w
        target_masks = [
            image_of(m, mapping)
            for m in a._set
            if m & ~placed_mask == 0 and (m | wbit) in a._set
        ]
        target = SimplicialComplex._from_closed_masks(target_masks)
        u_img = vertices_of(image_of(placed_mask, mapping))
        v = ample_witness(x, u_img, target)
        if v is None:
            return None
        mapping[w] = v
        placed_mask |= wbit
    return mapping


# ---------------------------------------------------------------------- Dedekind numbers

DEDEKIND_R_GUARD = 6


def _count_downsets(elems: List[int]) -> int:
    """Downward-closed subfamilies of a list of subset-masks in canonical order."""
    n = len(elems)
    universe = set(elems)
    facets = []
    for m in elems:
        below = tuple(m ^ (1 << v) for v in _iter_bits(m))
        facets.append(tuple(f for f in below if f in universe))
    chosen = set()

    def walk(start: int) -> int:
        total = 1
        for i in range(start, n):
            need = facets[i]
            if all(f in chosen for f in need):
                chosen.add(elems[i])
                total += walk(i + 1)
                chosen.discard(elems[i])
        return total

    return walk(0)


def _simplex_elements(r: int, include_empty: bool) -> List[int]:
    full = (1 << r) - 1
    elems = [m for m in range(0 if include_empty else 1, full + 1)]
    elems.sort(key=lambda m: (m.bit_count(), vertices_of(m)))
    return elems


def _monotone_masks(r: int) -> List[int]:
    """All downsets of the full powerset 2^[r], each encoded as a 2^r-bit mask."""
    elems = _simplex_elements(r, include_empty=True)
    n = len(elems)
    facets = []
    for m in elems:
        if m == 0:
            facets.append(())
        else:
            facets.append(tuple(m ^ (1 << v) for v in _iter_bits(m)))
    chosen: set = set()
    out: List[int] = []

    def encode() -> int:
        code = 0
        for s in chosen:
            code |= 1 << s
        return code

    def walk(start: int) -> None:
        out.append(encode())
        for i in range(start, n):
            if all(f in chosen for f in facets[i]):
                chosen.add(elems[i])
                walk(i + 1)
                chosen.discard(elems[i])

    walk(0)
    return out


def dedekind_reduced(r: int, force: bool = False) -> int:
    """Reduced Dedekind number M'(r): simplicial complexes on r labeled vertices.

    The empty complex counts; M'(0) = 1.  Computed by depth-first enumeration
    of downward-closed families for r <= 5.  For r = 6 that walk would visit
     7.8 million families with 63-step paths, so the value is assembled from
    the r = 5 enumeration instead: a complex on r+1 vertices is exactly a
    nested pair of complexes on r vertices (the part missing the last vertex
    and the link of the last vertex), so M(6) counts ordered containing pairs
    of 5-vertex downsets.
    """
    if r < 0:
        raise InvalidParametersError("r must be non-negative")
    if r > DEDEKIND_R_GUARD and not force:
        raise ResourceLimitError(
            f"r = {r} exceeds the guard {DEDEKIND_R_GUARD}; M'(7) has 2.4e12 terms"
        )
    if r <= 5:
        return _count_downsets(_simplex_elements(r, include_empty=False))
    if r >= 7:
        raise ResourceLimitError("M'(r) for r >= 7 is out of reach for this implementation")
    import numpy as np

    masks = np.array(_monotone_masks(5), dtype=np.uint64)
    total = 0
    chunk = 256
    for i in range(0, len(masks), chunk):
        block = masks[i : i + chunk, None]
        total += int(((block & masks[None, :]) == block).sum())
    return total - 1


def min_vertices_for_ample(r: int) -> int:
    """Lower bound M'(r) + r on the vertex count of any r-ample complex."""
    return dedekind_reduced(r) + r
