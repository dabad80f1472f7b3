import itertools

import numpy as np
import pytest

from kronecker import bgp, linalg as la, rep, structure as st, zoo
from kronecker.errors import DomainError, RefusalError
from kronecker.field import get_field

from conftest import random_invertible, random_rep


def _naive_submodules(M):
    """All closed pairs, testing every (U1, U2) pair of subspaces directly."""
    F = M.field
    out = set()
    for U1 in la.enumerate_subspaces(F, M.d1):
        for U2 in la.enumerate_subspaces(F, M.d2):
            ok = True
            for Mi in M.mats:
                for u in U1:
                    img = F.matmul(Mi, u)
                    if np.any(img) and not la.contains(F, U2, [int(np.flatnonzero(r)[0]) for r in U2], img):
                        ok = False
            if ok:
                out.add(rep.make_handle(F, M.d1, M.d2, U1, U2).key())
    return out


def _definitional_elementary(M):
    """No nonzero proper submodule with regular sub and regular factor."""
    for U in st.enumerate_submodules(M):
        if U.dim in ((0, 0), M.dim):
            continue
        S, Q = rep.subrep(M, U), rep.quotient(M, U)
        if bgp.is_regular_by_decomposition(S) and bgp.is_regular_by_decomposition(Q):
            return False
    return True


# -- submodules ------------------------------------------------------------------


def test_submodule_counts(F2):
    assert len(list(st.enumerate_submodules(zoo.build_S1(F2)))) == 2
    assert len(list(st.enumerate_submodules(zoo.build_B(F2, 0)))) == 3


@pytest.mark.parametrize("name", ["X", "Y", "EXAMPLE_M", "TREE_LEFT"])
def test_submodules_against_naive_oracle(F2, name):
    M = zoo.build(name, F2)
    got = [U.key() for U in st.enumerate_submodules(M)]
    assert len(got) == len(set(got))
    assert set(got) == _naive_submodules(M)


def test_submodules_random_F3(F3):
    rng = np.random.default_rng(0)
    for _ in range(10):
        M = random_rep(F3, rng, 2, 2)
        assert {U.key() for U in st.enumerate_submodules(M)} == _naive_submodules(M)


def test_submodule_bound(F2):
    with pytest.raises(RefusalError):
        list(st.enumerate_submodules(zoo.build_Y(F2), bound=8))


# -- elementarity -----------------------------------------------------------------


def test_elementary_examples(F2):
    assert st.is_elementary(zoo.build_X(F2))
    assert not st.is_elementary(zoo.build_nonelem_tree(F2, "left"))
    assert not st.is_elementary(rep.direct_sum(zoo.build_B(F2, 0), zoo.build_B(F2, 1)))
    assert st.is_elementary(zoo.build_Y(F2))


def test_elementary_domain_errors(F2):
    with pytest.raises(DomainError):
        st.is_elementary(zoo.build_S1(F2))
    with pytest.raises(DomainError):
        st.is_elementary(rep.zero_rep(F2, 0, 0))
    with pytest.raises(DomainError):
        st.nonelementarity_witness(zoo.build_P1(F2))


def test_witness_examples(F2):
    assert st.nonelementarity_witness(zoo.build_X(F2)) is None
    U, Q = st.nonelementarity_witness(zoo.build_example_M(F2))
    assert U.dim == (1, 1)
    U, Q = st.nonelementarity_witness(zoo.build_nonelem_tree(F2, "right"))
    assert U.dim == (1, 1) and Q.dim == (1, 1)


def test_elementary_and_witness_agree_random(F3):
    rng = np.random.default_rng(1)
    seen = 0
    while seen < 40:
        M = random_rep(F3, rng, 2, 2)
        if not bgp.is_regular_rep(M):
            continue
        seen += 1
        el = st.is_elementary(M)
        assert el == (st.nonelementarity_witness(M) is None)
        assert el == _definitional_elementary(M)


# -- filtrations --------------------------------------------------------------------


def test_filtration_of_X_is_trivial(F2):
    ch = st.elementary_filtration(zoo.build_X(F2))
    assert len(ch.factors) == 1 and st.validate_chain(zoo.build_X(F2), ch)


@pytest.mark.parametrize("q", [2, 3])
def test_filtrations_of_examples(q):
    F = get_field(q)
    B, X, V = zoo.build_B, zoo.build_X(F), zoo.build_V
    M, N = zoo.build_example_M(F), zoo.build_example_N(F)
    got = {}
    for name, mod in (("M", M), ("N", N)):
        for strat in ("min_sub", "max_sub"):
            ch = st.elementary_filtration(mod, strat)
            assert st.validate_chain(mod, ch)
            got[name, strat] = ch.factors
    f = got["M", "min_sub"]
    assert rep.is_isomorphic(f[0], B(F, 2)) and rep.is_isomorphic(f[1], X)
    f = got["M", "max_sub"]
    assert [x.dim for x in f] == [(1, 2), (2, 1)]
    assert bgp.is_regular_rep(f[0]) and rep.is_isomorphic(f[1], V(F, 1, 2))
    f = got["N", "min_sub"]
    assert rep.is_isomorphic(f[0], B(F, 1)) and rep.is_isomorphic(f[1], B(F, 1))
    assert rep.is_isomorphic(f[2], V(F, 0, 2))
    f = got["N", "max_sub"]
    assert rep.is_isomorphic(f[0], X) and rep.is_isomorphic(f[1], V(F, 0, 1))


def test_filtration_random_regular(F2):
    rng = np.random.default_rng(2)
    done = 0
    while done < 15:
        M = random_rep(F2, rng, 3, 2)
        if not bgp.is_regular_rep(M):
            continue
        for strat in ("min_sub", "max_sub"):
            assert st.validate_chain(M, st.elementary_filtration(M, strat))
        done += 1


# -- searches ---------------------------------------------------------------------


def test_find_u12_examples(F2):
    U = st.find_u12(zoo.build_X(F2))
    assert U.dim == (1, 2) and np.array_equal(U.u1, [[1, 0]])
    M = rep.direct_sum(zoo.build_B(F2, 0), zoo.build_S2(F2))
    U = st.find_u12(M)
    assert U.dim == (1, 2) and rep.is_closed(M, U)
    with pytest.raises(DomainError):
        st.find_u12(zoo.build_B(F2, 0))


def test_find_u12_closed_on_census(census22):
    for M in census22[::9]:
        U = st.find_u12(M)
        if U is not None:
            assert U.dim == (1, 2) and rep.is_closed(M, U)


def test_k2_profile(F2):
    prof = st.k2_restriction_profile(zoo.build_X(F2))
    assert len(prof) == 7 and all(d == 2 for _, d in prof)
    prof = st.k2_restriction_profile(zoo.build_nonelem_tree(F2, "right"))
    assert any(d != 2 for _, d in prof)
    # S(1) + S(2) has End of dimension exactly 2; one more simple summand pushes it past 2
    deg = rep.direct_sum(zoo.build_S1(F2), zoo.build_S2(F2))
    assert {d for _, d in st.k2_restriction_profile(deg)} == {2}
    deg = rep.direct_sum(zoo.build_S1(F2), zoo.build_S1(F2), zoo.build_S2(F2))
    assert min(d for _, d in st.k2_restriction_profile(deg)) > 2


def test_k2_profile_basis_independent(F3):
    M = zoo.build_X(F3)
    for P, d in st.k2_restriction_profile(M):
        g = np.array([[1, 1], [0, 1]])
        Q = F3.matmul(g, P)
        assert rep.end_dim(rep.restrict_k2(M, Q[0], Q[1])) == d


# -- normal forms -----------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3])
def test_x_normal_form_random_disguises(q):
    F = get_field(q)
    X = zoo.build_X(F)
    w = st.x_normal_form(X)
    assert w is not None and w.realises(X, X)
    rng = np.random.default_rng(q)
    for _ in range(100):
        M = rep.arrow_change(X, random_invertible(F, rng, 3))
        M = M.conjugate(random_invertible(F, rng, 2), random_invertible(F, rng, 2))
        w = st.x_normal_form(M)
        assert w is not None and w.realises(M, X)
        assert w.extra[2] != 0 and w.extra[3] != 0


def test_x_normal_form_precondition(F2):
    with pytest.raises(DomainError):
        st.x_normal_form(zoo.build_nonelem_tree(F2, "left"))
    with pytest.raises(DomainError):
        st.x_normal_form(zoo.build_Y(F2))


def test_nonelem_normal_form_examples(F2, F3):
    for F in (F2, F3):
        for variant in ("left", "right"):
            M = zoo.build_nonelem_tree(F, variant)
            got, w = st.nonelem_normal_form(M)
            assert got == variant and w.realises(M, M)
    with pytest.raises(DomainError):
        st.nonelem_normal_form(zoo.build_X(F2))


# -- coefficient quivers and trees -------------------------------------------------


def test_coefficient_quiver_examples(F2):
    G = st.coefficient_quiver(zoo.build_B(F2, 0))
    assert G.edges == ((0, 0, 0),) and st.is_tree(G)
    G = st.coefficient_quiver(zoo.build_X(F2))
    assert len(G.edges) == 4 and G.vertex_count == 4 and not st.is_tree(G)
    G = st.coefficient_quiver(zoo.build_k2_regular_R(F2, 2))
    assert st.is_path(G) and G.vertex_count == 4
    with pytest.raises(DomainError):
        st.coefficient_quiver(zoo.build_X(F2), b1=np.zeros((2, 2), dtype=np.int64))


def test_dot_output_golden(F2):
    dot = st.to_dot(st.coefficient_quiver(zoo.build_B(F2, 1)))
    assert dot == (
        "digraph coefficient_quiver {\n"
        "  rankdir=TB;\n"
        '  t0 [shape=box, label="1.0"];\n'
        '  b0 [shape=circle, label="2.0"];\n'
        '  t0 -> b0 [label="1"];\n'
        "}\n"
    )


@pytest.mark.parametrize("q", [2, 3])
def test_tree_search(q):
    F = get_field(q)
    assert st.tree_module_search(zoo.build_X(F)) is None
    for variant in ("left", "right"):
        M = zoo.build_nonelem_tree(F, variant)
        hit = st.tree_module_search(M)
        assert hit is not None
        assert st.is_tree(st.coefficient_quiver(M, *hit))
    assert st.tree_module_search(zoo.build_B(F, 0)) is not None


def test_tree_search_finds_tree_after_disguise(F3):
    rng = np.random.default_rng(4)
    M = zoo.build_nonelem_tree(F3, "left")
    M = rep.arrow_change(M, random_invertible(F3, rng, 3)).conjugate(
        random_invertible(F3, rng, 2), random_invertible(F3, rng, 2)
    )
    hit = st.tree_module_search(M)
    assert hit is not None and st.is_tree(st.coefficient_quiver(M, *hit))


def test_tree_search_bound(F2):
    with pytest.raises(RefusalError):
        st.tree_module_search(zoo.build_Y(F2), bound=10)


def test_tree_search_size_counts_unordered_bases(F2, F3):
    for F in (F2, F3):
        for d in (1, 2, 3):
            assert len(st._unordered_bases(F, d)) * 1 == st.tree_search_size(
                rep.zero_rep(F, d, 0, n=1)
            )


# -- exact sequence ----------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("t", [1, 2, 3])
def test_verify_prop5(q, t):
    r = st.verify_prop5(t, get_field(q))
    assert r["pass"] and r["composite_injective"] and r["quotient_isomorphic"]
    assert r["dimension_identity"]["holds"]


def test_verify_prop5_dims(F2):
    r = st.verify_prop5(2, F2)
    assert r["quotient_dim"] == [8, 2]
    assert r["dim_sigma_t_X"] == [10, 4]
    with pytest.raises(DomainError):
        st.verify_prop5(4, F2)


def test_sparsest_coefficient_quiver(F2, F3):
    for F in (F2, F3):
        r = st.sparsest_coefficient_quiver(zoo.build_X(F))
        assert r["min_edges"] == 4 and r["unique_cycle"]
        r = st.sparsest_coefficient_quiver(zoo.build_nonelem_tree(F, "left"))
        assert r["min_edges"] == 3 and not r["unique_cycle"]
    r = st.sparsest_coefficient_quiver(zoo.build_Y(F2))
    assert r["min_edges"] == 6 and r["unique_cycle"]
    G = st.coefficient_quiver(zoo.build_Y(F2), np.array(r["b1"]), np.array(r["b2"]), np.array(r["g"]))
    assert len(G.edges) == 6 and not st.is_tree(G)
    with pytest.raises(RefusalError):
        st.sparsest_coefficient_quiver(zoo.build_Y(F3))


def test_sparsest_without_edges_is_disconnected(F2):
    M = rep.direct_sum(zoo.build_S1(F2), zoo.build_S2(F2))
    assert st.sparsest_coefficient_quiver(M)["connected"] is False
