import numpy as np
import pytest

from kronecker import bgp, k0, linalg as la, rep, zoo
from kronecker.field import get_field

from conftest import all_reps, random_rep


def test_sigma_examples(F2):
    assert bgp.sigma_rep(zoo.build_S2(F2)).is_zero()
    assert rep.is_isomorphic(bgp.sigma_rep(zoo.build_X(F2)), zoo.build_Y(F2))
    assert bgp.sigma_rep(zoo.build_S1(F2)).dim == (3, 1)


def test_sigma_inverse_examples(F2):
    assert bgp.sigma_inv_rep(zoo.build_S1(F2)).is_zero()
    X = zoo.build_X(F2)
    assert rep.is_isomorphic(bgp.sigma_inv_rep(bgp.sigma_rep(X)), X)
    P = bgp.sigma_inv_rep(zoo.build_S2(F2))
    assert P.dim == (1, 3) and rep.is_isomorphic(P, zoo.build_P1(F2))


def test_sigma_dimension_formula(F3):
    rng = np.random.default_rng(0)
    for _ in range(100):
        M = random_rep(F3, rng, *rng.integers(0, 4, size=2))
        S = bgp.sigma_rep(M)
        r = la.rank(F3, M.horizontal()) if M.d1 and M.d2 else 0
        assert S.d2 == M.d1 and S.d1 == 3 * M.d1 - r


def test_tau_examples(F2):
    assert bgp.tau(zoo.build_P1(F2)).is_zero()
    assert bgp.tau(zoo.build_X(F2)).dim == (10, 4)
    assert bgp.tau_inv(zoo.build_S1(F2)).is_zero()


def test_predicate_examples(F2):
    assert bgp.is_preprojective(zoo.build_S2(F2))
    assert bgp.is_preprojective(zoo.build_P1(F2))
    assert not bgp.is_preprojective(zoo.build_X(F2))
    assert bgp.is_preinjective(zoo.build_S1(F2))
    for i in range(5):
        assert bgp.is_preinjective(zoo.build_I(F2, i))
    assert not bgp.is_preinjective(zoo.build_B(F2, 0))
    assert bgp.is_regular_rep(zoo.build_X(F2))
    assert not bgp.is_regular_rep(rep.direct_sum(zoo.build_X(F2), zoo.build_S1(F2)))
    assert bgp.is_regular_rep(rep.direct_sum(zoo.build_B(F2, 0), zoo.build_B(F2, 1)))


def test_sigma_morphism_is_morphism(F3):
    rng = np.random.default_rng(1)
    for _ in range(40):
        M, N = random_rep(F3, rng, 2, 2), random_rep(F3, rng, 2, 1)
        for f1, f2 in rep.hom_space(M, N).pairs:
            g1, g2 = bgp.sigma_morphism(M, N, f1, f2)
            assert rep.is_morphism(bgp.sigma_rep(M), bgp.sigma_rep(N), g1, g2)


@pytest.mark.parametrize("d", [(1, 1), (2, 1), (2, 2)])
def test_dimension_coherence_on_census(F2, d):
    for M in all_reps(F2, *d):
        if not rep.is_indecomposable(M):
            continue
        if M.dim != (0, 1):
            assert bgp.sigma_rep(M).dim == k0.sigma_dim(M.dim)
        if M.dim != (1, 0):
            assert bgp.sigma_inv_rep(M).dim == k0.sigma_inv_dim(M.dim)


def test_round_trip_and_trichotomy_on_census(census22):
    for M in census22:
        if not rep.is_indecomposable(M):
            continue
        flags = (bgp.is_preprojective(M), bgp.is_preinjective(M), bgp.is_regular_rep(M))
        assert sum(flags) == 1
        assert rep.is_isomorphic(bgp.sigma_inv_rep(bgp.sigma_rep(M)), M)
        assert rep.is_isomorphic(bgp.sigma_rep(bgp.sigma_inv_rep(M)), M)


def test_fast_regularity_matches_decomposition(census22):
    for M in census22:
        assert bgp.is_regular_rep(M) == bgp.is_regular_by_decomposition(M)


def test_fast_regularity_matches_decomposition_random():
    for q in (2, 3):
        F = get_field(q)
        rng = np.random.default_rng(q)
        for _ in range(150):
            M = random_rep(F, rng, *rng.integers(0, 4, size=2))
            assert bgp.is_regular_rep(M) == bgp.is_regular_by_decomposition(M)


def test_indecomposable_preprojective_dims():
    assert bgp.is_indecomposable_preprojective_dim((1, 3))
    assert bgp.is_indecomposable_preprojective_dim((3, 8))
    assert not bgp.is_indecomposable_preprojective_dim((1, 1))
    assert bgp.is_indecomposable_preinjective_dim((3, 1))


def test_two_arrow_shift(F2):
    R = zoo.build_k2_regular_R(F2, 3)
    S = bgp.sigma_rep(R)
    assert S.n == 2 and S.dim == (3, 3)
    assert rep.is_isomorphic(bgp.sigma_inv_rep(S), R)
