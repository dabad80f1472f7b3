import numpy as np
import pytest

from kronecker import bgp, k0, linalg as la, rep, structure as st, zoo
from kronecker.errors import DomainError
from kronecker.zoo import CoeffQuiverSpec

from conftest import random_invertible


def test_X_matrices(F2, F3):
    for F in (F2, F3):
        a, b, g = zoo.build_X(F).mats
        assert np.array_equal(a, np.eye(2))
        assert np.array_equal(b, [[0, 1], [0, 0]])  # (a,b) -> (b,0)
        assert np.array_equal(g, [[0, 0], [1, 0]])  # (a,b) -> (0,a)


def test_coeff_quiver_builder(F2):
    assert zoo.from_coeff_quiver(CoeffQuiverSpec(1, 1, ((0, 0, 0),)), F2) == zoo.build_B(F2, 0)
    assert zoo.from_coeff_quiver(CoeffQuiverSpec(1, 0), F2) == zoo.build_S1(F2)
    with pytest.raises(DomainError):
        zoo.from_coeff_quiver(CoeffQuiverSpec(1, 1, ((0, 1, 0),)), F2)
    with pytest.raises(DomainError):
        zoo.from_coeff_quiver(CoeffQuiverSpec(1, 1, ((0, 0, 0), (0, 0, 0))), F2)


@pytest.mark.parametrize(
    "name,dim",
    [("X", (2, 2)), ("Y", (4, 2)), ("B:0", (1, 1)), ("V:0,1", (2, 1)), ("S1", (1, 0)), ("S2", (0, 1)),
     ("P1", (1, 3)), ("I:1", (3, 1)), ("TREE_LEFT", (2, 2)), ("TREE_RIGHT", (2, 2)),
     ("EXAMPLE_M", (3, 3)), ("EXAMPLE_N", (4, 3)), ("R:2", (2, 2))],
)
@pytest.mark.parametrize("q", [2, 3])
def test_zoo_dims_and_indecomposable(name, dim, q):
    from kronecker.field import get_field

    M = zoo.build(name, get_field(q))
    assert M.dim == dim
    assert rep.is_indecomposable(M)


def test_annihilators(F2):
    V = zoo.build_V(F2, 1, 2)
    assert not V.mats[0].any()
    B = zoo.build_B(F2, 1)
    assert not B.mats[0].any() and not B.mats[2].any()
    assert not zoo.build_nonelem_tree(F2, "right").mats[2].any()
    assert rep.faithful_annihilator(zoo.build_nonelem_tree(F2, "left")) is None


def test_Y_contains_X_pattern(F2):
    Y = zoo.build_Y(F2)
    X = zoo.build_X(F2)
    for Ym, Xm in zip(Y.mats, X.mats):
        assert np.array_equal(Ym[:, 1:3], Xm)


def test_I_dims_and_preinjective(F2):
    v = (1, 0)
    for i in range(7):
        I = zoo.build_I(F2, i)
        assert I.dim == v
        assert bgp.is_preinjective(I)
        v = k0.sigma_dim(v)
    with pytest.raises(DomainError):
        zoo.build_I(F2, 11)


def test_nonelem_trees_not_elementary(F2):
    for variant in ("left", "right"):
        M = zoo.build_nonelem_tree(F2, variant)
        assert bgp.is_regular_rep(M)
        assert not st.is_elementary(M)
        G = st.coefficient_quiver(M)
        assert st.is_tree(G) and len(G.edges) == 3


def test_examples_regular_with_stated_pieces(F2):
    M, N = zoo.build_example_M(F2), zoo.build_example_N(F2)
    assert bgp.is_regular_rep(M) and bgp.is_regular_rep(N)
    X = zoo.build_X(F2)
    found_M = found_N = False
    for U in st.enumerate_submodules(M):
        if U.dim == (1, 1):
            S, Q = rep.subrep(M, U), rep.quotient(M, U)
            if rep.is_isomorphic(S, zoo.build_B(F2, 2)) and rep.is_isomorphic(Q, X):
                found_M = True
    for U in st.enumerate_submodules(N):
        if U.dim == (2, 2):
            S, Q = rep.subrep(N, U), rep.quotient(N, U)
            if rep.is_isomorphic(S, X) and rep.is_isomorphic(Q, zoo.build_V(F2, 0, 1)):
                found_N = True
    assert found_M and found_N


def test_k2_regular_R(F2):
    R1 = zoo.build_k2_regular_R(F2, 1)
    assert np.array_equal(R1.mats[0], [[1]]) and np.array_equal(R1.mats[1], [[0]])
    assert rep.end_dim(zoo.build_k2_regular_R(F2, 2)) == 2
    G = st.coefficient_quiver(R1)
    assert len(G.edges) == 1


def test_a_equivalence_of_arrow_changed_X(F2):
    X = zoo.build_X(F2)
    for g in la.general_linear_group(F2, 3)[::9]:
        assert rep.a_equivalent(rep.arrow_change(X, g), X) is not None


def test_parse_name_errors():
    with pytest.raises(DomainError):
        zoo.parse_name("Q")
    with pytest.raises(DomainError):
        zoo.parse_name("B")
    with pytest.raises(DomainError):
        zoo.parse_name("V:0,x")
    assert zoo.parse_name("v:1,2") == ("V", [1, 2])
