"""Generators for the complexes this package studies.

Four families live here, plus the randomness they share:

* Paley-type complexes over a prime field: a simplex is any vertex set whose
  pairwise differences have discrete logarithms summing to a quadratic
  residue, tested subset by subset.  Built level by level so downward closure
  holds by construction.
* The medial random model: every candidate simplex whose boundary survived is
  kept with an independent fair coin.  The probability of drawing a given
  complex is exactly 2**-h where h counts faces plus external simplexes.
* Cone towers: repeatedly attach one fresh vertex per (small) subcomplex,
  coned over it.  These produce the highly symmetric witnesses the rest of
  the package leans on.
* Fixed reference complexes: the thirteen-vertex flag example, iterated
  joins of two-point spheres, and the six-vertex projective plane.

All randomness flows through SplitMix64 so runs reproduce across platforms.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .ampleness import is_r_ample, min_vertices_for_ample
from .complexes import (
    AmbientContext,
    SimplicialComplex,
    _iter_bits,
    cone,
    enumerate_subcomplexes,
    external_simplexes,
    join,
    mask_of,
    relabeled,
)
from .errors import (
    IdCollisionError,
    InvalidParametersError,
    InvalidSubcomplexError,
    ResourceLimitError,
)

_U64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 with a bit buffer.

    Pure modular integer arithmetic, so the stream is identical on every
    platform and Python build.  Single bits are served from a buffered word,
    least significant bit first; `bits(k)` assembles k buffered bits with the
    first bit in the lowest position.
    """

    __slots__ = ("_state", "_buf", "_nbuf")

    def __init__(self, seed: int):
        self._state = seed & _U64
        self._buf = 0
        self._nbuf = 0

    def u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _U64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
        return z ^ (z >> 31)

    def bit(self) -> int:
        if self._nbuf == 0:
            self._buf = self.u64()
            self._nbuf = 64
        b = self._buf & 1
        self._buf >>= 1
        self._nbuf -= 1
        return b

    def bits(self, k: int) -> int:
        out = 0
        for i in range(k):
            out |= self.bit() << i
        return out

    def uniform_below(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection on the top of the range."""
        if n <= 0:
            raise InvalidParametersError("uniform_below needs n >= 1")
        if n == 1:
            return 0
        width = (n - 1).bit_length()
        while True:
            v = self.bits(width)
            if v < n:
                return v

    def choice(self, seq: Sequence):
        return seq[self.uniform_below(len(seq))]

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.uniform_below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]


# --------------------------------------------------------------------------
# prime-field arithmetic

_FIELD_GUARD = 1_000_000  # discrete logs are tabulated in full


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> Set[int]:
    out = set()
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.add(n)
    return out

def _is_primitive_root(g: int, q: int, factors: Set[int]) -> bool:
    return all(pow(g, (q - 1) // f, q) != 1 for f in factors)


def least_primitive_root(q: int) -> int:
    """Smallest generator of the multiplicative group mod a prime q."""
    if not _is_prime(q):
        raise InvalidParametersError(f"{q} is not prime")
    if q == 2:
        return 1
    factors = _prime_factors(q - 1)
    for g in range(2, q):
        if _is_primitive_root(g, q, factors):
            return g
    raise InvalidParametersError(f"no primitive root mod {q}")  # unreachable


@dataclass(frozen=True)
class PrimeFieldSpec:
    """Parameters of the Paley-type construction: a prime modulus q, an odd
    prime p dividing q - 1, and a primitive root g of the field.

    g defaults to the least primitive root.  Different primitive roots give
    different (generally non-isomorphic) complexes, so g is part of the
    construction's identity and is echoed in all output metadata.
    """

    q: int
    p: int
    g: Optional[int] = None

    def __post_init__(self):
        q, p, g = self.q, self.p, self.g
        if q > _FIELD_GUARD:
            raise ResourceLimitError(f"q = {q} exceeds the {_FIELD_GUARD} table guard")
        if not _is_prime(q):
            raise InvalidParametersError(f"q = {q} must be prime")
        if p == 2 or not _is_prime(p):
            raise InvalidParametersError(f"p = {p} must be an odd prime")
        if (q - 1) % p != 0:
            raise InvalidParametersError(f"p = {p} does not divide q - 1 = {q - 1}")
        if g is None:
            object.__setattr__(self, "g", least_primitive_root(q))
        else:
            if not 1 <= g < q or not _is_primitive_root(g, q, _prime_factors(q - 1)):
                raise InvalidParametersError(f"g = {g} is not a primitive root mod {q}")


@dataclass(frozen=True)
class PaleyResidueSet:
    """The allowed difference set of a Paley-type complex.

    residues holds the field elements whose discrete log is a quadratic
    residue mod p (zero counts as a residue); exponent_table maps every
    nonzero field element to its discrete log base g.
    """

    residues: frozenset
    exponent_table: Dict[int, int]

    @property
    def size(self) -> int:
        return len(self.residues)


def _quadratic_residues(p: int) -> Set[int]:
    # squares mod p, zero included
    return {(b * b) % p for b in range(p // 2 + 1)}


def paley_residues(spec: PrimeFieldSpec) -> PaleyResidueSet:
    """Difference set and full discrete-log table for a field spec.

    The set has exactly (p+1)(q-1)/(2p) elements, always contains 1, and is
    closed under negation (the discrete log of -1 is (q-1)/2, a multiple of p
    here because (q-1)/p is even).
    """
    q, p, g = spec.q, spec.p, spec.g
    table: Dict[int, int] = {}
    x = 1
    for a in range(q - 1):
        table[x] = a
        x = (x * g) % q
    qr = _quadratic_residues(p)
    residues = frozenset(y for y, a in table.items() if a % p in qr)
    return PaleyResidueSet(residues=residues, exponent_table=table)


def _extension_candidates(
    prev: List[Tuple[int, ...]], prev_set: Set[int], adj: Dict[int, int]
) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Vertex sets one larger than the previous level with full boundary.

    Every candidate is produced exactly once, from the facet missing its
    largest vertex, and candidates appear in canonical (lexicographic) order
    when prev does.
    """
    for vs in prev:
        base = 0
        for v in vs:
            base |= 1 << v
        common = adj[vs[0]]
        for v in vs[1:]:
            common &= adj[v]
        common &= ~((1 << (vs[-1] + 1)) - 1)
        for w in _iter_bits(common):
            m = base | (1 << w)
            if all((m ^ (1 << u)) in prev_set for u in vs):
                yield vs + (w,), m


def paley_complex(spec: PrimeFieldSpec, max_dim: int) -> SimplicialComplex:
    """Paley-type complex on the field with q elements, up to max_dim.

    A set {x_1..x_t} is a simplex when, for every subset S with |S| >= 2, the
    sum over pairs in S of the discrete logs of their differences is a
    quadratic residue mod p (zero included).  Built level by level: a new
    level-t candidate has all facets present, which already certifies every
    proper subset, so only the full-set sum needs testing.  The test does not
    depend on the order of each difference because -1 lands in the subgroup
    of p-th powers.
    """
    if max_dim < 0:
        raise InvalidParametersError("max_dim must be >= 0")
    rs = paley_residues(spec)
    q, p = spec.q, spec.p
    qr = _quadratic_residues(p)
    dlog = rs.exponent_table

    all_masks: Set[int] = {1 << v for v in range(q)}
    if max_dim == 0:
        return SimplicialComplex._from_closed_masks(all_masks)

    adj = {v: 0 for v in range(q)}
    prev: List[Tuple[int, ...]] = []
    prev_set: Set[int] = set()
    pair_sum: Dict[int, int] = {}  # simplex mask -> sum of pairwise dlogs, mod p
    for a in range(q):
        for b in range(a + 1, q):
            if (b - a) % q in rs.residues:
                m = (1 << a) | (1 << b)
                all_masks.add(m)
                prev.append((a, b))
                prev_set.add(m)
                pair_sum[m] = dlog[(b - a) % q] % p
                adj[a] |= 1 << b
                adj[b] |= 1 << a

    d = 2
    while prev and d <= max_dim:
        nxt: List[Tuple[int, ...]] = []
        nxt_set: Set[int] = set()
        for vs, m in _extension_candidates(prev, prev_set, adj):
            w = vs[-1]
            s = pair_sum[m ^ (1 << w)]
            for u in vs[:-1]:
                s += dlog[(w - u) % q]
            s %= p
            if s in qr:
                all_masks.add(m)
                nxt.append(vs)
                nxt_set.add(m)
                pair_sum[m] = s
        prev, prev_set = nxt, nxt_set
        d += 1
    return SimplicialComplex._from_closed_masks(all_masks)


def paley_parameter_check(r: int, p: int, n: int) -> bool:
    """Whether (p, n) lie in the regime where the Paley construction is
    guaranteed r-ample: p > 2**(2**r + 2r) and n > r*r*p**(2r).

    Exact big-integer evaluation; r = 2 already demands p > 256 and
    n > 4 * p**4, far beyond anything this package can verify directly.
    """
    if r < 1:
        raise InvalidParametersError("r must be >= 1")
    return p > (1 << (2**r + 2 * r)) and n > r * r * p ** (2 * r)


def existence_threshold(r: int) -> int:
    """Ambient vertex count beyond which a random medial complex is r-ample
    with positive probability: r * 2**r * 2**(2**r)."""
    if r < 1:
        raise InvalidParametersError("r must be >= 1")
    if r > 20:
        raise ResourceLimitError("threshold would need more than 2**20 bits")
    return r * (1 << r) * (1 << (1 << r))


def ampleness_failure_bound(n: int, r: int) -> float:
    """Upper bound on the probability that a medial sample on n ambient
    vertices fails to be r-ample: n**r * 2**(2**r) * (1 - 2**-(2**r))**(n-r).

    Evaluated in log space.  Values above 1 are returned as computed; they
    carry no information but show where the bound stops helping.
    """
    if r < 1 or n <= r:
        raise InvalidParametersError("need n > r >= 1")
    block = 2**r
    loss = 2.0**-block if block <= 1074 else 0.0
    log2b = r * math.log2(n) + block + (n - r) * (math.log1p(-loss) / math.log(2.0))
    if log2b >= 1024:
        return math.inf
    return 2.0**log2b


# --------------------------------------------------------------------------
# the medial random model


@dataclass(frozen=True)
class MedialSample:
    """One draw from the fair-coin measure on complexes inside an ambient
    simplex with n vertices.  h is the total number of coin flips the draw
    consumed, which equals the count of faces plus external simplexes, so the
    probability of this exact complex is 2**-h.
    """

    complex: SimplicialComplex
    n: int
    seed: int
    h: int

    @property
    def probability(self) -> Fraction:
        return Fraction(1, 1 << self.h)


def medial_sample(n: int, seed: int, max_dim: Optional[int] = None) -> MedialSample:
    """Sample a random complex: keep each of the n vertices with probability
    1/2, then at every dimension keep each candidate simplex whose full
    boundary survived with probability 1/2, until a level has no candidates.

    Candidates are enumerated in canonical order from the previous level, so
    a fixed seed reproduces the identical complex everywhere.  If max_dim is
    given, sampling stops there and the would-be candidates one level up are
    counted into h without being drawn (they are external by construction).
    """
    if n < 1:
        raise InvalidParametersError("n must be >= 1")
    rng = SplitMix64(seed)
    draws = 0
    kept: Set[int] = set()

    verts = []
    for v in range(n):
        draws += 1
        if rng.bit():
            verts.append(v)
            kept.add(1 << v)

    truncated = 0
    if max_dim == 0:
        k = len(verts)
        truncated = k * (k - 1) // 2
    else:
        prev: List[Tuple[int, ...]] = []
        prev_set: Set[int] = set()
        adj = {v: 0 for v in verts}
        for i, a in enumerate(verts):
            for b in verts[i + 1 :]:
                draws += 1
                if rng.bit():
                    m = (1 << a) | (1 << b)
                    kept.add(m)
                    prev.append((a, b))
                    prev_set.add(m)
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
        d = 2
        while prev:
            if max_dim is not None and d > max_dim:
                truncated = sum(1 for _ in _extension_candidates(prev, prev_set, adj))
                break
            nxt: List[Tuple[int, ...]] = []
            nxt_set: Set[int] = set()
            for vs, m in _extension_candidates(prev, prev_set, adj):
                draws += 1
                if rng.bit():
                    kept.add(m)
                    nxt.append(vs)
                    nxt_set.add(m)
            prev, prev_set = nxt, nxt_set
            d += 1

    cx = SimplicialComplex._from_closed_masks(kept)
    return MedialSample(complex=cx, n=n, seed=seed, h=draws + truncated)


def medial_probability(x: SimplicialComplex, n: int) -> int:
    """Exponent h such that the fair-coin measure on an n-vertex ambient
    simplex gives x probability 2**-h: the number of simplexes of x plus the
    number of external simplexes (absent ambient vertices included)."""
    ambient = AmbientContext.standard(n)
    return x.simplex_count + len(external_simplexes(x, ambient))


# --------------------------------------------------------------------------
# cone towers


def one_vertex_extension(
    x: SimplicialComplex, a: SimplicialComplex, new_vertex: Optional[int] = None
) -> Tuple[SimplicialComplex, int]:
    """Attach one fresh vertex coned over a subcomplex a of x.

    The new vertex's link is exactly a, which makes it a witness for every
    pair (U, a) with a inside the induced complex on U.  Existing links gain
    only simplexes through the new vertex, so witnesses that existed before
    keep working.  Returns the extended complex and the vertex id used.
    """
    if not a.is_subcomplex_of(x):
        raise InvalidSubcomplexError("extension base must be a subcomplex")
    if new_vertex is None:
        new_vertex = x.vertex_mask().bit_length()  # smallest id above all of x
    if x.has_vertex(new_vertex):
        raise IdCollisionError([new_vertex])
    bit = 1 << new_vertex
    masks = set(x._set)
    masks.add(bit)
    masks.update(m | bit for m in a._set)
    return SimplicialComplex._from_closed_masks(masks), new_vertex


@dataclass(frozen=True)
class TowerStage:
    """One stage of a cone tower.  label_map sends each vertex added at this
    stage to the maximal simplexes of the subcomplex it was coned over, in
    the labels of the parent stage (which persist into this one)."""

    stage: int
    complex: SimplicialComplex
    parent_vertex_count: int
    label_map: Dict[int, Tuple[Tuple[int, ...], ...]]


def _count_subcomplexes_bounded(x: SimplicialComplex, limit: int) -> int:
    """Count subcomplexes of x, stopping as soon as the count exceeds limit."""
    n = 0
    for _ in enumerate_subcomplexes(x):
        n += 1
        if n > limit:
            return n
    return n


DEFAULT_TOWER_BUDGET = 100_000


def rado_tower(levels: int, budget: int = DEFAULT_TOWER_BUDGET) -> List[TowerStage]:
    """Finite stages of the cone tower that converges to the countable
    fully-ample complex.  Stage 0 is a point; stage k+1 attaches, for every
    subcomplex A of stage k (the empty one included), a fresh vertex coned
    over A.

    Growth is doubly exponential (stages have 1, 3, 13, then hundreds of
    thousands of vertices), so the total vertex budget is mandatory.  When a
    stage would push past it, a ResourceLimitError is raised whose `stages`
    attribute carries the completed stages; the would-be stage size is
    counted with early cutoff, never materialized.
    """
    if levels < 0:
        raise InvalidParametersError("levels must be >= 0")
    if budget < 1:
        raise InvalidParametersError("budget must be >= 1")
    point = SimplicialComplex([(0,)])
    stages = [TowerStage(stage=0, complex=point, parent_vertex_count=0, label_map={})]
    for k in range(1, levels + 1):
        parent = stages[-1].complex
        have = parent.vertex_count
        room = budget - have
        need = _count_subcomplexes_bounded(parent, room)
        if need > room:
            err = ResourceLimitError(
                f"stage {k} needs more than {budget} total vertices; "
                f"raise the budget to materialize it"
            )
            err.stages = stages
            raise err
        masks = set(parent._set)
        label_map: Dict[int, Tuple[Tuple[int, ...], ...]] = {}
        v = parent.vertex_mask().bit_length()
        for sub in enumerate_subcomplexes(parent):
            bit = 1 << v
            masks.add(bit)
            masks.update(m | bit for m in sub._set)
            label_map[v] = tuple(sub.maximal_simplexes())
            v += 1
        stages.append(
            TowerStage(
                stage=k,
                complex=SimplicialComplex._from_closed_masks(masks),
                parent_vertex_count=have,
                label_map=label_map,
            )
        )
    return stages


def _small_subcomplexes(
    x: SimplicialComplex, max_vertices: int, include_empty: bool
) -> Iterator[SimplicialComplex]:
    """Subcomplexes of x with at most max_vertices vertices, enumerated by
    (vertex count, vertex set, canonical family order).  Each subcomplex is
    produced once, under the vertex set it fully uses."""
    if include_empty:
        yield SimplicialComplex()
    verts = x.vertices()
    for size in range(1, max_vertices + 1):
        for chosen in combinations(verts, size):
            want = mask_of(chosen)
            induced = x.induced(chosen)
            if induced.vertex_mask() != want:
                continue
            for sub in enumerate_subcomplexes(induced):
                if sub.vertex_mask() == want:
                    yield sub


def barmak_tower(
    n: int,
    iterations: int,
    budget: int = DEFAULT_TOWER_BUDGET,
    include_empty: bool = False,
) -> List[TowerStage]:
    """Cone tower over the (n+1)-fold join of two-point spheres: each
    iteration attaches a fresh vertex coned over every subcomplex with at
    most 2n+1 vertices.

    Cones over the empty subcomplex (isolated vertices) are off by default
    because they disconnect the complex; pass include_empty=True for the
    other reading.  Budget semantics match rado_tower.
    """
    if n < 0:
        raise InvalidParametersError("n must be >= 0")
    if iterations < 0:
        raise InvalidParametersError("iterations must be >= 0")
    if budget < 1:
        raise InvalidParametersError("budget must be >= 1")
    cap = 2 * n + 1
    base = sphere_join(n + 1)
    stages = [TowerStage(stage=0, complex=base, parent_vertex_count=0, label_map={})]
    for k in range(1, iterations + 1):
        parent = stages[-1].complex
        have = parent.vertex_count
        room = budget - have
        count = 0
        for _ in _small_subcomplexes(parent, cap, include_empty):
            count += 1
            if count > room:
                err = ResourceLimitError(
                    f"iteration {k} needs more than {budget} total vertices"
                )
                err.stages = stages
                raise err
        masks = set(parent._set)
        label_map: Dict[int, Tuple[Tuple[int, ...], ...]] = {}
        v = parent.vertex_mask().bit_length()
        for sub in _small_subcomplexes(parent, cap, include_empty):
            bit = 1 << v
            masks.add(bit)
            masks.update(m | bit for m in sub._set)
            label_map[v] = tuple(sub.maximal_simplexes())
            v += 1
        stages.append(
            TowerStage(
                stage=k,
                complex=SimplicialComplex._from_closed_masks(masks),
                parent_vertex_count=have,
                label_map=label_map,
            )
        )
    return stages


# --------------------------------------------------------------------------
# fixed reference complexes


def example_thirteen() -> SimplicialComplex:
    """Thirteen vertices on a circle: edges join residues differing by
    1, 3, 4, 9, 10, or 12 mod 13, and the thirteen triangles {i, i+1, i+4}
    are filled.  Two-ample but not three-ample, with 39 edges and Euler
    characteristic -13."""
    diffs = {1, 3, 4, 9, 10, 12}
    simplexes: List[Tuple[int, ...]] = []
    for i in range(13):
        for j in range(i + 1, 13):
            if (j - i) % 13 in diffs:
                simplexes.append((i, j))
    for i in range(13):
        simplexes.append(tuple(sorted((i, (i + 1) % 13, (i + 4) % 13))))
    return SimplicialComplex(simplexes)


def sphere_join(k: int) -> SimplicialComplex:
    """Join of k two-point spheres: the boundary of the k-dimensional
    cross-polytope, a triangulation of the (k-1)-sphere on 2k vertices.
    Vertices 2i and 2i+1 are the i-th antipodal pair; a simplex is any set
    picking at most one vertex from each pair."""
    if k < 1:
        raise InvalidParametersError("k must be >= 1")
    if k > 12:
        raise ResourceLimitError("3**k simplexes; k capped at 12")
    out = SimplicialComplex([(0,), (1,)])
    for i in range(1, k):
        out = join(out, SimplicialComplex([(2 * i,), (2 * i + 1,)]))
    return out


def projective_plane() -> SimplicialComplex:
    """The six-vertex triangulation of the real projective plane: complete
    1-skeleton, ten triangles, every edge on exactly two of them.  Found by
    exhausting 6-vertex closed surfaces with Euler characteristic 1."""
    faces = [
        (0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 5), (0, 4, 5),
        (1, 2, 5), (1, 3, 4), (1, 4, 5), (2, 3, 4), (2, 3, 5),
    ]
    return SimplicialComplex(faces)


# --------------------------------------------------------------------------
# randomized search


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a search for an r-ample medial sample.  complex is None
    when every trial failed; trials_used counts the draws actually made."""

    complex: Optional[SimplicialComplex]
    trials_used: int
    n: int
    r: int
    seed: int

    @property
    def found(self) -> bool:
        return self.complex is not None

    def winning_seed(self) -> Optional[int]:
        if self.complex is None:
            return None
        return self.seed + self.trials_used - 1


def _ample_trial(args: Tuple[int, int, int]) -> bool:
    n, r, trial_seed = args
    sample = medial_sample(n, trial_seed)
    cx = sample.complex
    if cx.vertex_count < min_vertices_for_ample(r):
        return False  # below the hard floor, cannot be r-ample
    return is_r_ample(cx, r).is_ample


def search_ample(
    n: int, r: int, trials: int, seed: int, threads: int = 1
) -> SearchResult:
    """Draw medial samples with seeds seed, seed+1, ... and return the first
    that verifies r-ample.  Samples with fewer vertices than the proven floor
    for r-ampleness are rejected without running the verifier.

    With threads > 1 the trials run in a process pool, scheduled in waves;
    the first success in trial-index order wins, so the result matches the
    sequential one exactly.
    """
    if trials < 1:
        raise InvalidParametersError("trials must be >= 1")
    if n < min_vertices_for_ample(r):
        raise InvalidParametersError(
            f"no complex on fewer than {min_vertices_for_ample(r)} vertices is {r}-ample"
        )
    if threads <= 1:
        for i in range(trials):
            if _ample_trial((n, r, seed + i)):
                return SearchResult(
                    complex=medial_sample(n, seed + i).complex,
                    trials_used=i + 1,
                    n=n,
                    r=r,
                    seed=seed,
                )
        return SearchResult(complex=None, trials_used=trials, n=n, r=r, seed=seed)

    wave = max(threads * 4, 16)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        done = 0
        while done < trials:
            batch = list(range(done, min(done + wave, trials)))
            outcomes = pool.map(_ample_trial, [(n, r, seed + i) for i in batch])
            for i, ok in zip(batch, outcomes):
                if ok:
                    return SearchResult(
                        complex=medial_sample(n, seed + i).complex,
                        trials_used=i + 1,
                        n=n,
                        r=r,
                        seed=seed,
                    )
            done += len(batch)
    return SearchResult(complex=None, trials_used=trials, n=n, r=r, seed=seed)
