"""Reflection (shift) functors, the Auslander-Reiten translate and the
preprojective / preinjective / regular trichotomy.

``sigma_rep`` replaces ``M`` by the kernel of ``[M_1 ... M_n]: M1^n -> M2``
together with the ``n`` coordinate projections onto ``M1``; ``sigma_inv_rep``
is the dual cokernel construction.  Both are defined for any number of
arrows, so the same code serves the 2-Kronecker quiver.
"""

from __future__ import annotations

import numpy as np

from . import k0
from . import linalg as la
from .rep import KronRep, decompose, simple_summands


def sigma_rep(M: KronRep) -> KronRep:
    F, n, d1 = M.field, M.n, M.d1
    if d1 == 0:
        return KronRep(F, 0, 0, [np.zeros((0, 0), dtype=np.int64)] * n)
    K = la.kernel_basis(F, M.horizontal()) if M.d2 else np.eye(n * d1, dtype=np.int64)
    m = K.shape[1]
    return KronRep(F, m, d1, [K[i * d1 : (i + 1) * d1, :] for i in range(n)])


def sigma_inv_rep(M: KronRep) -> KronRep:
    F, n, d2 = M.field, M.n, M.d2
    if d2 == 0:
        return KronRep(F, 0, 0, [np.zeros((0, 0), dtype=np.int64)] * n)
    if M.d1:
        P, c = la.cokernel_projection(F, M.vertical())
    else:
        P, c = np.eye(n * d2, dtype=np.int64), n * d2
    return KronRep(F, d2, c, [P[:, i * d2 : (i + 1) * d2] for i in range(n)])


def sigma_morphism(M: KronRep, N: KronRep, f1, f2):
    """The morphism ``sigma M -> sigma N`` induced by ``(f1, f2): M -> N``.

    Its sink component is ``f1``; its source component is ``f1`` applied
    coordinatewise to the kernel, rewritten in the kernel basis of ``sigma N``.
    """
    F, n = M.field, M.n
    sM, sN = sigma_rep(M), sigma_rep(N)
    if sM.d1 == 0 or sN.d1 == 0:
        return np.zeros((sN.d1, sM.d1), dtype=np.int64), np.asarray(f1, dtype=np.int64)
    KM = la.kernel_basis(F, M.horizontal()) if M.d2 else np.eye(n * M.d1, dtype=np.int64)
    KN = la.kernel_basis(F, N.horizontal()) if N.d2 else np.eye(n * N.d1, dtype=np.int64)
    lifted = F.matmul(F.kron(np.eye(n, dtype=np.int64), f1), KM)
    g1 = la.solve(F, KN, lifted)
    if g1 is None:
        raise ValueError("not a morphism")
    return g1, np.asarray(f1, dtype=np.int64)


def tau(M: KronRep) -> KronRep:
    return sigma_rep(sigma_rep(M))


def tau_inv(M: KronRep) -> KronRep:
    return sigma_inv_rep(sigma_inv_rep(M))


def _killed_by(M: KronRep, step) -> bool:
    """Does iterating ``step`` reach zero?  Stops as soon as the total dimension fails to drop."""
    cur = M
    for _ in range(M.total_dim + 2):
        if cur.is_zero():
            return True
        nxt = step(cur)
        if nxt.total_dim >= cur.total_dim:
            return False
        cur = nxt
    return cur.is_zero()


def is_preprojective(M: KronRep) -> bool:
    """Every indecomposable summand is killed by a power of tau.

    Powers of sigma are used; tau = sigma^2, and on a nonzero module with
    only preprojective summands each sigma step strictly lowers the total
    dimension, so a step that does not is a certificate of the contrary.
    """
    return _killed_by(M, sigma_rep)


def is_preinjective(M: KronRep) -> bool:
    return _killed_by(M, sigma_inv_rep)


def _depth(M: KronRep) -> int:
    return len(k0.preprojective_dims(M.total_dim, M.n))


def has_preprojective_summand(M: KronRep) -> bool:
    """Some indecomposable summand of ``M`` is preprojective.

    A preprojective ``P`` is carried to ``S(2)`` by a power of sigma, and
    sigma is an equivalence away from ``S(2)``, so it suffices to look for
    an ``S(2)`` summand in ``M, sigma M, sigma^2 M, ...`` up to the number of
    preprojective dimension vectors that fit in ``M``.
    """
    cur = M
    for _ in range(_depth(M)):
        if cur.is_zero():
            return False
        if simple_summands(cur)[1]:
            return True
        cur = sigma_rep(cur)
    return False


def has_preinjective_summand(M: KronRep) -> bool:
    cur = M
    for _ in range(_depth(M)):
        if cur.is_zero():
            return False
        if simple_summands(cur)[0]:
            return True
        cur = sigma_inv_rep(cur)
    return False


def is_regular_rep(M: KronRep) -> bool:
    """No indecomposable summand is preprojective or preinjective."""
    return not has_preprojective_summand(M) and not has_preinjective_summand(M)


def is_regular_by_decomposition(M: KronRep, bound: int | None = None) -> bool:
    """Reference implementation: decompose, then test each summand."""
    parts = decompose(M) if bound is None else decompose(M, bound)
    return all(not is_preprojective(P) and not is_preinjective(P) for P in parts)


def is_indecomposable_preprojective_dim(v, n: int = 3) -> bool:
    return tuple(v) in k0.preprojective_dims(v[0] + v[1], n)


def is_indecomposable_preinjective_dim(v, n: int = 3) -> bool:
    return tuple(v)[::-1] in k0.preprojective_dims(v[0] + v[1], n)
