import itertools

import numpy as np
import pytest

from kronecker import linalg as la, orbits, rep, zoo
from kronecker.errors import RefusalError
from kronecker.field import field_of_order, get_field


@pytest.mark.parametrize("q,d", [(2, (1, 1)), (2, (2, 1)), (3, (1, 1)), (2, (2, 2))])
def test_index_roundtrip(q, d):
    layout = orbits.Layout(field_of_order(q), 3, *d)
    for i in range(0, layout.size, max(1, layout.size // 97)):
        assert layout.encode(layout.decode(i)) == i


def test_index_order_is_lexicographic(F2):
    layout = orbits.Layout(F2, 3, 1, 1)
    got = [tuple(int(m[0, 0]) for m in layout.decode(i).mats) for i in range(layout.size)]
    assert got == list(itertools.product(range(2), repeat=3))


@pytest.mark.parametrize("q", [2, 3])
def test_index_maps_match_direct_action(q):
    F = get_field(q)
    layout = orbits.Layout(F, 3, 2, 2)
    rng = np.random.default_rng(q)
    g1, g2 = la.gl_generators(F, 2)[0], la.gl_generators(F, 2)[-1]
    f = orbits.IndexMap(layout, orbits.module_action(layout, g1, g2))
    a = la.gl_generators(F, 3)[-1]
    fa = orbits.IndexMap(layout, orbits.arrow_action(layout, a))
    idx = rng.integers(0, layout.size, size=50)
    for i, j, k in zip(idx, f(idx), fa(idx)):
        M = layout.decode(int(i))
        want = rep.KronRep(F, 2, 2, [F.matmul(F.matmul(g2, m), g1) for m in M.mats])
        assert layout.decode(int(j)) == want
        assert layout.decode(int(k)) == rep.arrow_change(M, a)


def _brute_orbits(F, d1, d2):
    """Orbit count by canonical keys over the whole space."""
    from conftest import all_reps

    return len({rep.canonical_key(M) for M in all_reps(F, d1, d2)})


@pytest.mark.parametrize("q,d", [(2, (1, 1)), (2, (2, 1)), (3, (1, 1)), (2, (2, 2)), (3, (2, 1))])
def test_orbit_sweep_partitions_space(q, d):
    F = get_field(q)
    layout = orbits.Layout(F, 3, *d)
    reps, sizes = orbits.orbit_sweep(layout)
    assert sizes.sum() == layout.size
    assert len(reps) == _brute_orbits(F, *d)
    G = la.gl_order(q, d[0]) * la.gl_order(q, d[1])
    assert all(G % s == 0 for s in sizes)


def test_orbit_members_are_isomorphic(F2):
    layout = orbits.Layout(F2, 3, 2, 2)
    X = zoo.build_X(F2)
    members = orbits.orbit_members(layout, layout.encode(X))
    assert members.size == la.gl_order(2, 2) ** 2  # Aut(X) = F_2^* is trivial
    key = rep.canonical_key(X)
    assert all(rep.canonical_key(layout.decode(int(i))) == key for i in members[::5])


def test_orbit_mask_with_arrows(F2):
    layout = orbits.Layout(F2, 3, 1, 1)
    mask = orbits.orbit_mask(layout, [layout.encode(zoo.build_B(F2, 0))], with_arrows=True)
    assert mask.sum() == 7  # every nonzero bristle


def test_index_space_refusal(F2):
    layout = orbits.Layout(field_of_order(3), 3, 4, 2)
    with pytest.raises(RefusalError):
        orbits.orbit_sweep(layout)


def test_orbit_size_formula_matches_sweep(F2, F3):
    for F, d in ((F2, (2, 2)), (F3, (1, 2)), (F2, (2, 1))):
        layout = orbits.Layout(F, 3, *d)
        reps, sizes = orbits.orbit_sweep(layout)
        for i, s in zip(reps[:: max(1, len(reps) // 40)], sizes[:: max(1, len(reps) // 40)]):
            assert orbits.orbit_size(F, layout.decode(int(i))) == s


def test_automorphism_count_brute_force(F2):
    for name in ("X", "TREE_RIGHT", "V:0,1"):
        M = zoo.build(name, F2)
        brute = sum(
            1
            for g1 in la.general_linear_group(F2, M.d1)
            for g2 in la.general_linear_group(F2, M.d2)
            if M.conjugate(g1, g2) == M
        )
        assert rep.automorphism_count(M) == brute
    assert rep.automorphism_count(rep.direct_sum(zoo.build_S1(F2), zoo.build_S1(F2))) == la.gl_order(2, 2)
