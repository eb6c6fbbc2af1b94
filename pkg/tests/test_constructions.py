"""Constructions: RNG, Paley-type complexes, random samples, towers, search."""

from fractions import Fraction
from itertools import combinations

import pytest

from amplekit import (
    PrimeFieldSpec,
    SimplicialComplex,
    SplitMix64,
    ampleness_failure_bound,
    barmak_tower,
    enumerate_subcomplexes,
    example_thirteen,
    existence_threshold,
    is_r_ample,
    least_primitive_root,
    link_restricted,
    medial_probability,
    medial_sample,
    one_vertex_extension,
    paley_complex,
    paley_parameter_check,
    paley_residues,
    projective_plane,
    rado_tower,
    search_ample,
    sphere_join,
)
from amplekit.errors import (
    IdCollisionError,
    InvalidParametersError,
    InvalidSubcomplexError,
    ResourceLimitError,
)


# --------------------------------------------------------------------------
# deterministic RNG


def test_splitmix64_reference_stream():
    # first outputs for seed 0, from the reference C implementation
    rng = SplitMix64(0)
    assert rng.u64() == 0xE220A8397B1DCDAF
    assert rng.u64() == 0x6E789E6AA1B965F4
    assert rng.u64() == 0x06C45D188009454F


def test_splitmix64_bits_are_lsb_first():
    word = SplitMix64(42).u64()
    rng = SplitMix64(42)
    got = [rng.bit() for _ in range(64)]
    assert got == [(word >> i) & 1 for i in range(64)]
    rng2 = SplitMix64(42)
    assert rng2.bits(16) == word & 0xFFFF


def test_splitmix64_uniform_below_range_and_determinism():
    rng = SplitMix64(7)
    draws = [rng.uniform_below(10) for _ in range(500)]
    assert all(0 <= d < 10 for d in draws)
    assert set(draws) == set(range(10))
    replay = SplitMix64(7)
    assert [replay.uniform_below(10) for _ in range(3)] == draws[:3]
    with pytest.raises(InvalidParametersError):
        rng.uniform_below(0)


def test_splitmix64_shuffle_is_a_permutation():
    items = list(range(20))
    rng = SplitMix64(3)
    shuffled = items[:]
    rng.shuffle(shuffled)
    assert sorted(shuffled) == items
    assert shuffled != items  # 1 in 20! chance of a false alarm


# --------------------------------------------------------------------------
# prime-field specs and residue sets


def test_least_primitive_root_known_values():
    assert least_primitive_root(7) == 3
    assert least_primitive_root(13) == 2
    assert least_primitive_root(23) == 5
    assert least_primitive_root(41) == 6


def test_prime_field_spec_validation():
    spec = PrimeFieldSpec(13, 3)
    assert spec.g == 2  # least primitive root filled in
    assert PrimeFieldSpec(13, 3, 6).g == 6
    with pytest.raises(InvalidParametersError):
        PrimeFieldSpec(12, 3)  # q not prime
    with pytest.raises(InvalidParametersError):
        PrimeFieldSpec(13, 2)  # p must be odd
    with pytest.raises(InvalidParametersError):
        PrimeFieldSpec(13, 5)  # 5 does not divide 12
    with pytest.raises(InvalidParametersError):
        PrimeFieldSpec(13, 3, 3)  # 3 has order 3 mod 13, not primitive
    with pytest.raises(ResourceLimitError):
        PrimeFieldSpec(1_000_003, 3)


def test_residue_set_for_thirteen_three():
    rs = paley_residues(PrimeFieldSpec(13, 3))
    # discrete logs base 2: 1,2,4,8,3,6,12,11,9,5,10,7 for exponents 0..11;
    # keep the elements whose exponent is 0 or 1 mod 3
    assert rs.residues == frozenset({1, 2, 3, 5, 8, 10, 11, 12})
    assert rs.size == 8
    assert rs.exponent_table[2] == 1
    assert rs.exponent_table[7] == 11


def test_residue_set_size_formula():
    for q, p in ((7, 3), (13, 3), (11, 5), (31, 3), (31, 5), (61, 3), (101, 5)):
        rs = paley_residues(PrimeFieldSpec(q, p))
        assert rs.size == (p + 1) * (q - 1) // (2 * p)
        assert 1 in rs.residues
        assert all((q - y) % q in rs.residues for y in rs.residues)


def _brute_paley(q: int, p: int, g: int, max_dim: int) -> SimplicialComplex:
    """Definition-level evaluator: a vertex set is a simplex when every
    subset of size two or more has pairwise-difference discrete logs summing
    to a square mod p."""
    dlog = {}
    x = 1
    for a in range(q - 1):
        dlog[x] = a
        x = (x * g) % q
    squares = {(b * b) % p for b in range(p)}

    def good(vs):
        for size in range(2, len(vs) + 1):
            for s in combinations(vs, size):
                t = sum(dlog[(b - a) % q] for a, b in combinations(s, 2))
                if t % p not in squares:
                    return False
        return True

    simplexes = [(v,) for v in range(q)]
    for size in range(2, max_dim + 2):
        found = [vs for vs in combinations(range(q), size) if good(vs)]
        simplexes.extend(found)
        if not found:
            break
    return SimplicialComplex(simplexes)


def test_paley_complex_matches_direct_evaluator():
    for q, p in ((7, 3), (13, 3), (11, 5)):
        spec = PrimeFieldSpec(q, p)
        assert paley_complex(spec, 3) == _brute_paley(q, p, spec.g, 3)


def test_paley_thirteen_three_shape():
    x = paley_complex(PrimeFieldSpec(13, 3), 2)
    assert x.f_vector() == (13, 52, 26)
    # 8-regular: every vertex lies on eight edges
    edges = list(x.simplexes(1))
    for v in x.vertices():
        assert sum(1 for e in edges if v in e) == 8
    # dimension cap respected
    assert paley_complex(PrimeFieldSpec(13, 3), 1).f_vector() == (13, 52)
    assert paley_complex(PrimeFieldSpec(13, 3), 0).f_vector() == (13,)
    with pytest.raises(InvalidParametersError):
        paley_complex(PrimeFieldSpec(13, 3), -1)


def test_parameter_regime_predicates():
    assert paley_parameter_check(1, 17, 290)
    assert not paley_parameter_check(1, 17, 289)
    assert not paley_parameter_check(1, 13, 10**6)
    assert paley_parameter_check(2, 257, 4 * 257**4 + 1)
    assert not paley_parameter_check(2, 257, 4 * 257**4)
    with pytest.raises(InvalidParametersError):
        paley_parameter_check(0, 17, 290)

    assert existence_threshold(1) == 8
    assert existence_threshold(2) == 128
    assert existence_threshold(3) == 6144
    with pytest.raises(ResourceLimitError):
        existence_threshold(21)

    # failure bound: vanishing for large n, useless (above one) for tiny n
    assert ampleness_failure_bound(1000, 1) < 1e-100
    assert ampleness_failure_bound(10, 2) > 1.0
    assert ampleness_failure_bound(2000, 2) < ampleness_failure_bound(1000, 2)
    with pytest.raises(InvalidParametersError):
        ampleness_failure_bound(2, 2)


# --------------------------------------------------------------------------
# the fair-coin random model


def test_medial_sample_is_deterministic():
    a = medial_sample(12, 99)
    b = medial_sample(12, 99)
    assert a.complex == b.complex and a.h == b.h
    assert a.probability == Fraction(1, 2**a.h)


def test_medial_sample_h_matches_probability_exponent():
    for seed in range(60):
        s = medial_sample(6, seed)
        assert s.h == medial_probability(s.complex, 6)


def test_medial_sample_dimension_cap():
    for seed in range(30):
        s = medial_sample(8, seed, max_dim=1)
        assert s.complex.dim <= 1
        # truncated candidates are external simplexes, so the identity holds
        assert s.h == medial_probability(s.complex, 8)


def test_medial_measure_sums_to_one_on_two_vertices():
    ambient = SimplicialComplex([(0, 1)])
    total = Fraction(0)
    count = 0
    for sub in enumerate_subcomplexes(ambient):
        total += Fraction(1, 2 ** medial_probability(sub, 2))
        count += 1
    assert count == 5
    assert total == 1


def test_medial_sample_rejects_bad_n():
    with pytest.raises(InvalidParametersError):
        medial_sample(0, 1)


# --------------------------------------------------------------------------
# cone towers


def test_one_vertex_extension_link_property(octahedron):
    base = SimplicialComplex([(0, 2), (3,)])
    extended, w = one_vertex_extension(octahedron, base)
    assert w == 6
    assert extended.vertex_count == 7
    assert link_restricted(extended, w, octahedron.vertices()) == base
    # the old complex sits inside unchanged
    assert octahedron.is_subcomplex_of(extended)
    with pytest.raises(InvalidSubcomplexError):
        one_vertex_extension(octahedron, SimplicialComplex([(0, 1)]))
    with pytest.raises(IdCollisionError):
        one_vertex_extension(octahedron, base, new_vertex=3)


def test_rado_tower_vertex_counts():
    stages = rado_tower(2)
    assert [st.complex.vertex_count for st in stages] == [1, 3, 13]
    assert stages[1].parent_vertex_count == 1
    assert stages[2].parent_vertex_count == 3


def test_rado_tower_label_map_records_links():
    stages = rado_tower(2)
    for k in (1, 2):
        parent = stages[k - 1].complex
        st = stages[k]
        seen = set()
        for v, maximal in st.label_map.items():
            a = SimplicialComplex(maximal)
            assert link_restricted(st.complex, v, parent.vertices()) == a
            seen.add(a)
        # one cone vertex per subcomplex of the parent, empty included
        assert len(seen) == len(st.label_map)
        assert len(seen) == sum(1 for _ in enumerate_subcomplexes(parent))


def test_rado_tower_budget_abort_reports_completed_stages():
    with pytest.raises(ResourceLimitError) as exc:
        rado_tower(3, budget=100)
    stages = exc.value.stages
    assert len(stages) == 3
    assert stages[-1].complex.vertex_count == 13
    with pytest.raises(InvalidParametersError):
        rado_tower(-1)


def test_barmak_tower_first_iteration():
    stages = barmak_tower(1, 1)
    assert stages[0].complex == sphere_join(2)
    assert stages[1].complex.vertex_count == 34
    assert barmak_tower(1, 1, include_empty=True)[1].complex.vertex_count == 35
    # every added vertex is coned over at most 2n+1 = 3 vertices
    for v, maximal in stages[1].label_map.items():
        a = SimplicialComplex(maximal)
        assert a.vertex_count <= 3
        assert link_restricted(stages[1].complex, v, stages[0].complex.vertices()) == a


def test_barmak_tower_budget_abort():
    with pytest.raises(ResourceLimitError) as exc:
        barmak_tower(1, 2, budget=50)
    assert len(exc.value.stages) == 2


# --------------------------------------------------------------------------
# fixed reference complexes


def test_example_thirteen_shape():
    x = example_thirteen()
    assert x.f_vector() == (13, 39, 13)
    assert x.euler_characteristic() == -13


def test_sphere_join_shapes():
    assert sphere_join(1).f_vector() == (2,)
    assert sphere_join(2).f_vector() == (4, 4)
    assert sphere_join(3).f_vector() == (6, 12, 8)
    assert sphere_join(4).f_vector() == (8, 24, 32, 16)
    with pytest.raises(InvalidParametersError):
        sphere_join(0)
    with pytest.raises(ResourceLimitError):
        sphere_join(13)


def test_sphere_join_excludes_antipodal_pairs():
    x = sphere_join(3)
    for i in range(3):
        assert (2 * i, 2 * i + 1) not in x


def test_projective_plane_shape():
    x = projective_plane()
    assert x.f_vector() == (6, 15, 10)
    assert x.euler_characteristic() == 1
    triangles = list(x.simplexes(2))
    for e in x.simplexes(1):
        on = sum(1 for t in triangles if set(e) <= set(t))
        assert on == 2


# --------------------------------------------------------------------------
# randomized search


def test_search_ample_finds_one_ample_sample():
    res = search_ample(10, 1, trials=60, seed=0)
    assert res.found
    assert is_r_ample(res.complex, 1).is_ample
    assert res.winning_seed() == res.seed + res.trials_used - 1
    assert medial_sample(10, res.winning_seed()).complex == res.complex


def test_search_ample_miss_reports_trials():
    res = search_ample(7, 2, trials=3, seed=0)
    assert not res.found
    assert res.complex is None
    assert res.trials_used == 3
    assert res.winning_seed() is None


def test_search_ample_threads_match_sequential():
    seq = search_ample(10, 1, trials=60, seed=0)
    par = search_ample(10, 1, trials=60, seed=0, threads=2)
    assert par.found == seq.found
    assert par.trials_used == seq.trials_used
    assert par.complex == seq.complex


def test_search_ample_rejects_hopeless_parameters():
    with pytest.raises(InvalidParametersError):
        search_ample(6, 2, trials=5, seed=0)  # below the 7-vertex floor
    with pytest.raises(InvalidParametersError):
        search_ample(10, 1, trials=0, seed=0)
