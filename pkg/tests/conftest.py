"""Shared fixtures and independent brute-force oracles.

The oracles here re-implement definitions directly from first principles
(exhaustive enumeration, naive set arithmetic) so the package's optimized
engines are checked against something that cannot share their bugs.
"""

from itertools import chain, combinations

import pytest

from amplekit import SimplicialComplex, example_thirteen, projective_plane, sphere_join


@pytest.fixture
def e13():
    return example_thirteen()


@pytest.fixture
def octahedron():
    return sphere_join(3)


@pytest.fixture
def c4():
    return sphere_join(2)


@pytest.fixture
def rp2():
    return projective_plane()


@pytest.fixture
def full_triangle():
    return SimplicialComplex([(0, 1, 2)])


# --------------------------------------------------------------------------
# oracle helpers (naive on purpose)


def powerset(iterable):
    s = list(iterable)
    return chain.from_iterable(combinations(s, k) for k in range(len(s) + 1))


def brute_subcomplexes(x):
    """Every downward-closed subset of x's simplexes, the slow way.

    Exponential in the simplex count; only for tiny fixtures.
    """
    simplexes = [frozenset(s) for s in x.simplexes()]
    found = []
    for subset in powerset(simplexes):
        fam = set(subset)
        if all(
            frozenset(f) in fam
            for s in fam
            for f in combinations(sorted(s), len(s) - 1)
            if f
        ):
            found.append(SimplicialComplex([tuple(sorted(s)) for s in fam]))
    return found


def brute_link_restricted(x, v, u_vertices):
    """Lk(v) intersected with the subcomplex induced on U, from the raw
    definition: faces s with vertices inside U, v not in s, s + {v} in x."""
    u = set(u_vertices)
    faces = []
    for s in x.simplexes():
        if v in s or not set(s) <= u:
            continue
        if tuple(sorted(set(s) | {v})) in x:
            faces.append(s)
    return SimplicialComplex(faces)


def brute_is_r_ample(x, r):
    """Definition-level r-ampleness over all (U, A) pairs.  Tiny inputs only."""
    verts = x.vertices()
    if not verts:
        return False
    for size in range(0, r + 1):
        for u in combinations(verts, size):
            xu = x.induced(u)
            for a in brute_subcomplexes(xu):
                if not any(
                    brute_link_restricted(x, v, u) == a
                    for v in verts
                    if v not in u
                ):
                    return False
    return True


def brute_is_r_conic(x, r):
    """Definition-level r-conicity: every subcomplex on at most r vertices
    sits inside some closed star.  Tiny inputs only."""
    if x.is_empty:
        return False
    stars = [x.closed_star(v) for v in x.vertices()]
    for u in powerset(x.vertices()):
        if len(u) > r:
            continue
        for a in brute_subcomplexes(x.induced(u)):
            if a.is_empty:
                continue
            if not any(a.is_subcomplex_of(st) for st in stars):
                return False
    return True
