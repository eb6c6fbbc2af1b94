"""Ampleness and conicity engines against definition-level brute force."""

import time
from itertools import combinations

import pytest

from amplekit import (
    SimplicialComplex,
    ample_witness,
    dedekind_reduced,
    extend_embedding,
    is_r_ample,
    is_r_conic,
    link_restricted,
    max_ampleness,
    max_conicity,
    medial_sample,
    min_vertices_for_ample,
    sphere_join,
    stars_intersection,
)
from amplekit.ampleness import iter_witnesses
from amplekit.errors import (
    AbsentVertexError,
    InvalidEmbeddingError,
    InvalidParametersError,
    InvalidQueryError,
    InvalidSubcomplexError,
    ResourceLimitError,
)

from conftest import brute_is_r_ample, brute_is_r_conic, brute_link_restricted


def test_link_restricted_matches_brute_force(e13):
    for v in (0, 5, 12):
        for u in ((1, 2), (1, 4, 9), (), (3,)):
            if v in u:
                continue
            assert link_restricted(e13, v, u) == brute_link_restricted(e13, v, u)


def test_link_restricted_rejects_vertex_inside_u(e13):
    with pytest.raises(InvalidQueryError):
        link_restricted(e13, 1, (1, 2))
    with pytest.raises(AbsentVertexError):
        link_restricted(e13, 77, (1, 2))


def test_witness_lookup(e13):
    # the only triangle through the edge {0,1} has apex 4
    full_edge = SimplicialComplex([(0, 1)])
    assert ample_witness(e13, (0, 1), full_edge) == 4
    assert list(iter_witnesses(e13, (0, 1), full_edge)) == [4]
    # a target that is not a subcomplex of the induced complex is rejected
    with pytest.raises(InvalidSubcomplexError):
        ample_witness(e13, (0, 2), SimplicialComplex([(0, 2)]))


def test_engine_agrees_with_brute_force_on_small_complexes():
    fixtures = [
        SimplicialComplex([(0,)]),
        SimplicialComplex([(0, 1)]),
        SimplicialComplex([(0, 1), (2,)]),
        sphere_join(2),
        SimplicialComplex([(0, 1, 2)]),
        SimplicialComplex([(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
    ]
    for seed in range(12):
        fixtures.append(medial_sample(6, seed).complex)
    for x in fixtures:
        if x.is_empty:
            continue
        for r in (1, 2):
            got = is_r_ample(x, r).is_ample
            want = brute_is_r_ample(x, r)
            assert got == want, (x, r)


def test_fast_and_slow_paths_agree():
    for seed in range(40, 70):
        x = medial_sample(12, seed).complex
        if x.is_empty:
            continue
        for r in (1, 2):
            fast = is_r_ample(x, r, use_fast_path=True).is_ample
            slow = is_r_ample(x, r, use_fast_path=False).is_ample
            assert fast == slow


def test_example_thirteen_ample_verdicts(e13):
    assert is_r_ample(e13, 2).is_ample
    verdict = is_r_ample(e13, 3)
    assert not verdict.is_ample
    assert verdict.counterexample is not None
    assert max_ampleness(e13, r_cap=3) == 2


def test_not_ample_counterexample_is_genuine(e13):
    verdict = is_r_ample(e13, 3, use_fast_path=False)
    u, a = verdict.counterexample
    assert len(u) == 3
    assert ample_witness(e13, u, a) is None


def test_ample_guard():
    with pytest.raises(ResourceLimitError):
        is_r_ample(sphere_join(2), 5)
    with pytest.raises(InvalidParametersError):
        is_r_ample(sphere_join(2), -1)


def test_vertex_floor():
    # fewer vertices than the floor can never be r-ample
    assert min_vertices_for_ample(1) == 3
    assert min_vertices_for_ample(2) == 7
    assert min_vertices_for_ample(3) == 22
    assert min_vertices_for_ample(4) == 171
    assert not is_r_ample(SimplicialComplex([(0, 1, 2)]), 2).is_ample


def test_conic_engine_agrees_with_brute_force():
    fixtures = [
        SimplicialComplex([(0,)]),
        SimplicialComplex([(0, 1, 2)]),
        sphere_join(2),
        SimplicialComplex([(0, 1), (1, 2), (2, 3)]),
    ]
    for seed in range(100, 112):
        fixtures.append(medial_sample(6, seed).complex)
    for x in fixtures:
        if x.is_empty:
            continue
        for r in (0, 1, 2, 3):
            got = is_r_conic(x, r).is_conic
            want = brute_is_r_conic(x, r)
            assert got == want, (x, r)


def test_conicity_of_spheres():
    # the k-fold join of two-point spheres is (2k-1)-conic and no better:
    # 2k vertices minus one antipodal pair always fit in a star, all of
    # them never do
    for k in (2, 3):
        sph = sphere_join(k)
        assert is_r_conic(sph, 2 * k - 1).is_conic
        assert not is_r_conic(sph, 2 * k).is_conic
        assert max_conicity(sph, r_cap=2 * k + 1) == 2 * k - 1


def test_zero_conic_means_non_empty():
    assert is_r_conic(SimplicialComplex([(0,)]), 0).is_conic
    assert not is_r_conic(SimplicialComplex(), 0).is_conic
    assert max_conicity(SimplicialComplex(), r_cap=3) == -1


def test_stars_intersection_direct(octahedron):
    # two adjacent vertices: stars meet in the square plus both vertices
    meet = stars_intersection(octahedron, (0, 2))
    assert meet.has_vertex(0) and meet.has_vertex(2)
    assert (4, 5) in meet or (4,) in meet
    # antipodal vertices: stars meet in the common equator square
    anti = stars_intersection(octahedron, (0, 1))
    assert not anti.has_vertex(0) and not anti.has_vertex(1)
    assert anti.vertex_count == 4
    with pytest.raises(AbsentVertexError):
        stars_intersection(octahedron, (0, 99))


def test_stars_intersection_drops_conicity_by_one_per_vertex():
    # spot checks of the census the acceptance suite runs at scale
    for seed in (7, 21, 33):
        x = medial_sample(10, seed).complex
        if x.is_empty:
            continue
        r = max_conicity(x, r_cap=4)
        if r < 1:
            continue
        v = x.vertices()[0]
        meet = stars_intersection(x, (v,))
        assert is_r_conic(meet, r - 1).is_conic


def test_extend_embedding_into_ample_host(e13):
    # a triangle embeds edge-first into the 2-ample host: place the edge
    # {0,1}, then the engine finds an apex for the third corner
    triangle = SimplicialComplex([(0, 1, 2)])
    full = extend_embedding(e13, triangle, (0, 1), {0: 0, 1: 1})
    assert full is not None
    assert full[0] == 0 and full[1] == 1
    image = tuple(sorted(full.values()))
    assert image in e13
    # a non-injective start is rejected outright
    with pytest.raises(InvalidEmbeddingError):
        extend_embedding(e13, triangle, (0, 1), {0: 0, 1: 0})
    # a start whose image misses the edge is not an embedding at all
    assert (0, 2) not in e13
    with pytest.raises(InvalidEmbeddingError):
        extend_embedding(e13, triangle, (0, 1), {0: 0, 1: 2})


def test_dedekind_reduced_known_values():
    start = time.perf_counter()
    assert dedekind_reduced(0) == 1
    assert dedekind_reduced(1) == 2
    assert dedekind_reduced(2) == 5
    assert dedekind_reduced(3) == 19
    assert dedekind_reduced(4) == 167
    assert dedekind_reduced(5) == 7580
    assert time.perf_counter() - start < 60


def test_dedekind_reduced_independent_oracle():
    """Count monotone families a second way: downsets of the full subset
    lattice are pairs (g, h) of downsets one dimension lower with g inside
    h, and complexes on r vertices are downsets of the lattice minus one."""

    def downsets_of_cube(r):
        # all downward-closed subsets of 2^[r], as frozensets of masks
        masks = list(range(1 << r))
        found = [frozenset()]
        for m in masks:
            extra = []
            for d in found:
                if all((sub | m) != m or sub in d or sub == m for sub in masks if sub != m):
                    subs_ok = all(
                        sub in d for sub in masks if sub != m and (sub & m) == sub
                    )
                    if subs_ok:
                        extra.append(d | {m})
            found.extend(extra)
        return found

    low = downsets_of_cube(2)
    assert len(low) == 6  # Dedekind count for two generators
    pairs = sum(1 for g in low for h in low if g <= h)
    # one more generator doubles via the pair construction
    assert pairs == 20  # Dedekind count for three generators
    assert dedekind_reduced(2) == len(low) - 1
    assert dedekind_reduced(3) == pairs - 1
    big = downsets_of_cube(4)
    assert dedekind_reduced(4) == len(big) - 1
    pairs5 = sum(1 for g in big for h in big if g <= h)
    assert dedekind_reduced(5) == pairs5 - 1


def test_dedekind_reduced_six_by_independent_composition():
    """The r = 6 value, cross-derived by materializing the level-5 downsets
    as pair masks and counting containments a second way."""
    import numpy as np

    # downsets of the 4-cube as 16-bit masks, by flat enumeration
    sub_masks = []
    for e in range(16):
        m = 0
        for f in range(16):
            if f & e == f:
                m |= 1 << f
        sub_masks.append(m)
    level4 = [
        c
        for c in range(1 << 16)
        if all(c & sub_masks[e] == sub_masks[e] for e in range(16) if c >> e & 1)
    ]
    assert len(level4) == 168
    # a downset of the 5-cube is a contained pair of 4-cube downsets,
    # encoded as a 32-bit mask
    level5 = np.array(
        [g | (h << 16) for g in level4 for h in level4 if g & h == g],
        dtype=np.uint64,
    )
    assert len(level5) == 7581
    total = 0
    for i in range(0, len(level5), 512):
        block = level5[i : i + 512, None]
        total += int(((block & level5[None, :]) == block).sum())
    assert dedekind_reduced(6) == total - 1 == 7828353


def test_dedekind_guard():
    with pytest.raises(ResourceLimitError):
        dedekind_reduced(7)
    with pytest.raises(InvalidParametersError):
        dedekind_reduced(-1)
