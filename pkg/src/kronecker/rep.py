"""Representations of the n-Kronecker quiver (n = 2 or 3) and their morphisms.

A representation ``M`` consists of spaces ``M1 = F^d1`` (source) and
``M2 = F^d2`` (sink) and ``n`` matrices of shape ``d2 x d1``, one per arrow,
acting on column vectors of ``M1``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .errors import ContractViolation, DomainError, RefusalError
from .field import GF

DEFAULT_IDEMPOTENT_BOUND = 2**20
DEFAULT_ISO_BOUND = 2**20
_CHUNK = 1 << 14


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class KronRep:
    """A representation of K(n); immutable after construction."""

    __slots__ = ("field", "d1", "d2", "mats", "_key")

    def __init__(self, field: GF, d1: int, d2: int, mats: Sequence):
        if len(mats) == 0:
            raise DomainError("a Kronecker representation needs at least one arrow")
        arrs = []
        for m in mats:
            a = np.asarray(m, dtype=np.int64).reshape(d2, d1)
            if a.size and (a.min() < 0 or a.max() >= field.q):
                raise DomainError(f"matrix entries must lie in 0..{field.q - 1}")
            arrs.append(_frozen(a))
        self.field = field
        self.d1 = int(d1)
        self.d2 = int(d2)
        self.mats = tuple(arrs)
        self._key = None

    @classmethod
    def from_matrices(cls, field: GF, mats: Sequence) -> "KronRep":
        arrs = [np.asarray(m, dtype=np.int64) for m in mats]
        shapes = {a.shape for a in arrs}
        if len(shapes) != 1 or arrs[0].ndim != 2:
            raise ContractViolation(f"arrow matrices must share one 2-D shape, got {shapes}")
        d2, d1 = arrs[0].shape
        return cls(field, d1, d2, arrs)

    @property
    def n(self) -> int:
        return len(self.mats)

    @property
    def dim(self) -> Tuple[int, int]:
        return (self.d1, self.d2)

    @property
    def total_dim(self) -> int:
        return self.d1 + self.d2

    def is_zero(self) -> bool:
        return self.d1 == 0 and self.d2 == 0

    def horizontal(self) -> np.ndarray:
        """The map ``M1^n -> M2`` as the d2 x (n d1) block row."""
        return np.hstack(self.mats) if self.d2 else np.zeros((0, self.n * self.d1), dtype=np.int64)

    def vertical(self) -> np.ndarray:
        """The map ``M1 -> M2^n`` as the (n d2) x d1 block column."""
        return np.vstack(self.mats) if self.d1 else np.zeros((self.n * self.d2, 0), dtype=np.int64)

    def combination(self, c) -> np.ndarray:
        """The matrix of the arrow-space element ``sum c_i * arrow_i``."""
        c = np.asarray(c, dtype=np.int64)
        flat = np.array([m.ravel() for m in self.mats], dtype=np.int64).reshape(self.n, -1)
        return self.field.lincomb(c[None, :], flat).reshape(self.d2, self.d1)

    def key(self) -> bytes:
        if self._key is None:
            head = np.array([self.field.p, self.field.k, self.n, self.d1, self.d2], dtype=np.int64)
            body = np.concatenate([head] + [m.ravel() for m in self.mats])
            self._key = body.astype(np.int16).tobytes()
        return self._key

    def __eq__(self, other):
        return isinstance(other, KronRep) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rows = [m.tolist() for m in self.mats]
        return f"KronRep({self.field!r}, dim={self.dim}, mats={rows})"

    def __reduce__(self):
        return (KronRep, (self.field, self.d1, self.d2, [m.copy() for m in self.mats]))

    def conjugate(self, g1, g2) -> "KronRep":
        """Base change: the representation ``g2 M_i g1^{-1}`` (isomorphic to self)."""
        F = self.field
        g1inv = la.inverse(F, g1) if self.d1 else np.zeros((0, 0), dtype=np.int64)
        return KronRep(F, self.d1, self.d2, [F.matmul(F.matmul(g2, m), g1inv) for m in self.mats])


def zero_rep(field: GF, d1: int, d2: int, n: int = 3) -> KronRep:
    return KronRep(field, d1, d2, [np.zeros((d2, d1), dtype=np.int64)] * n)


def direct_sum(*reps: KronRep) -> KronRep:
    if not reps:
        raise DomainError("direct sum of nothing")
    F, n = reps[0].field, reps[0].n
    if any(r.field != F or r.n != n for r in reps):
        raise DomainError("direct sum needs a common field and arrow count")
    d1 = sum(r.d1 for r in reps)
    d2 = sum(r.d2 for r in reps)
    mats = []
    for i in range(n):
        m = np.zeros((d2, d1), dtype=np.int64)
        r0 = c0 = 0
        for r in reps:
            m[r0 : r0 + r.d2, c0 : c0 + r.d1] = r.mats[i]
            r0 += r.d2
            c0 += r.d1
        mats.append(m)
    return KronRep(F, d1, d2, mats)


def _check_pair(M: KronRep, N: KronRep):
    if M.field != N.field:
        raise DomainError(f"field mismatch: {M.field} vs {N.field}")
    if M.n != N.n:
        raise DomainError(f"arrow count mismatch: {M.n} vs {N.n}")


# -- morphisms --------------------------------------------------------------


@dataclass(frozen=True)
class HomBasis:
    """Basis of Hom(M, N): pairs ``(f1, f2)`` with ``f2 M_i = N_i f1``."""

    pairs: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    source_dim: Tuple[int, int]
    target_dim: Tuple[int, int]

    @property
    def dim(self) -> int:
        return len(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def flat(self) -> Tuple[np.ndarray, np.ndarray]:
        """Basis stacked as (dim, e1*d1) and (dim, e2*d2) arrays."""
        (d1, d2), (e1, e2) = self.source_dim, self.target_dim
        a = np.array([p[0].ravel() for p in self.pairs], dtype=np.int64).reshape(self.dim, e1 * d1)
        b = np.array([p[1].ravel() for p in self.pairs], dtype=np.int64).reshape(self.dim, e2 * d2)
        return a, b

    def combine(self, F: GF, coeffs) -> Tuple[np.ndarray, np.ndarray]:
        """The morphisms for a batch of coefficient rows, shapes (N, e1, d1), (N, e2, d2)."""
        (d1, d2), (e1, e2) = self.source_dim, self.target_dim
        coeffs = np.asarray(coeffs, dtype=np.int64).reshape(-1, self.dim)
        a, b = self.flat()
        N = coeffs.shape[0]
        return (F.lincomb(coeffs, a).reshape(N, e1, d1), F.lincomb(coeffs, b).reshape(N, e2, d2))


def intertwiner_system(M: KronRep, N: KronRep) -> np.ndarray:
    """Coefficient matrix of ``f2 M_i - N_i f1 = 0`` in the unknowns (vec f1, vec f2)."""
    _check_pair(M, N)
    F = M.field
    d1, d2, e1, e2 = M.d1, M.d2, N.d1, N.d2
    blocks = []
    for Mi, Ni in zip(M.mats, N.mats):
        left = F.neg(F.kron(Ni, np.eye(d1, dtype=np.int64)))
        right = F.kron(np.eye(e2, dtype=np.int64), Mi.T)
        blocks.append(np.hstack([left.reshape(e2 * d1, e1 * d1), right.reshape(e2 * d1, e2 * d2)]))
    return np.vstack(blocks)


def hom_space(M: KronRep, N: KronRep) -> HomBasis:
    """A basis of Hom(M, N)."""
    _check_pair(M, N)
    F = M.field
    d1, d2, e1, e2 = M.d1, M.d2, N.d1, N.d2
    nunk = e1 * d1 + e2 * d2
    if nunk == 0:
        return HomBasis((), M.dim, N.dim)
    K = la.kernel_basis(F, intertwiner_system(M, N))
    pairs = []
    for j in range(K.shape[1]):
        col = K[:, j]
        f1 = _frozen(col[: e1 * d1].reshape(e1, d1))
        f2 = _frozen(col[e1 * d1 :].reshape(e2, d2))
        pairs.append((f1, f2))
    return HomBasis(tuple(pairs), M.dim, N.dim)


def hom_dim(M: KronRep, N: KronRep) -> int:
    _check_pair(M, N)
    nunk = N.d1 * M.d1 + N.d2 * M.d2
    if nunk == 0:
        return 0
    return nunk - la.rank(M.field, intertwiner_system(M, N))


def end_dim(M: KronRep) -> int:
    return hom_dim(M, M)


def is_morphism(M: KronRep, N: KronRep, f1, f2) -> bool:
    F = M.field
    return all(np.array_equal(F.matmul(f2, Mi), F.matmul(Ni, f1)) for Mi, Ni in zip(M.mats, N.mats))


def _coefficient_chunks(q: int, m: int, order: Optional[np.ndarray] = None):
    """All coefficient vectors of F_q^m in lexicographic order, chunked."""
    total = q**m
    weights = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        yield (idx[:, None] // weights[None, :]) % q


def _mat_power_is_zero(F: GF, a: np.ndarray) -> np.ndarray:
    """Batch test: is each square matrix in ``a`` (N, d, d) nilpotent?"""
    d = a.shape[-1]
    if d == 0:
        return np.ones(a.shape[0], dtype=bool)
    p = a
    e = 1
    while e < d:
        p = F.matmul(p, p)
        e *= 2
    return ~p.reshape(p.shape[0], -1).any(axis=1)


@dataclass(frozen=True)
class EndInfo:
    """Outcome of an exhaustive scan of the endomorphism ring."""

    dim: int
    indecomposable: bool
    scalar_local: bool
    idempotent: Optional[Tuple[np.ndarray, np.ndarray]] = None


def endomorphism_info(
    M: KronRep, bound: int = DEFAULT_IDEMPOTENT_BOUND, rng: Optional[np.random.Generator] = None
) -> EndInfo:
    """Scan End(M) for nontrivial idempotents and count its nilpotent elements.

    ``M`` is indecomposable iff 0 and 1 are its only idempotents; it is
    scalar-local iff in addition every endomorphism is a scalar plus a
    nilpotent, which for a local ring is equivalent to End(M) having exactly
    ``q^(dim End - 1)`` nilpotent elements.  ``rng`` permutes the scan order
    through a random change of basis of End(M).
    """
    F = M.field
    if M.is_zero():
        return EndInfo(0, False, False)
    basis = hom_space(M, M)
    m = basis.dim
    if m == 1:
        return EndInfo(1, True, True)
    size = F.q**m
    if size > bound:
        raise RefusalError(f"idempotent scan of an End ring of dimension {m}", size, bound)
    a, b = basis.flat()
    if rng is not None:
        while True:
            t = rng.integers(0, F.q, size=(m, m))
            if la.is_invertible(F, t):
                break
        a, b = F.lincomb(t, a), F.lincomb(t, b)
    d1, d2 = M.d1, M.d2
    id1, id2 = np.eye(d1, dtype=np.int64).ravel(), np.eye(d2, dtype=np.int64).ravel()
    nilpotent = 0
    for coeffs in _coefficient_chunks(F.q, m):
        e1 = F.lincomb(coeffs, a).reshape(len(coeffs), d1, d1)
        e2 = F.lincomb(coeffs, b).reshape(len(coeffs), d2, d2)
        idem = np.all((F.matmul(e1, e1) == e1).reshape(len(coeffs), -1), axis=1)
        idem &= np.all((F.matmul(e2, e2) == e2).reshape(len(coeffs), -1), axis=1)
        flat1, flat2 = e1.reshape(len(coeffs), -1), e2.reshape(len(coeffs), -1)
        zero = ~flat1.any(axis=1) & ~flat2.any(axis=1)
        one = np.all(flat1 == id1, axis=1) & np.all(flat2 == id2, axis=1)
        hit = np.flatnonzero(idem & ~zero & ~one)
        if hit.size:
            i = int(hit[0])
            return EndInfo(m, False, False, (_frozen(e1[i]), _frozen(e2[i])))
        nilpotent += int(np.count_nonzero(_mat_power_is_zero(F, e1) & _mat_power_is_zero(F, e2)))
    return EndInfo(m, True, nilpotent == F.q ** (m - 1))


def automorphism_count(M: KronRep, bound: int = DEFAULT_IDEMPOTENT_BOUND) -> int:
    """|Aut(M)|, counting the invertible elements of End(M) exhaustively."""
    F = M.field
    basis = hom_space(M, M)
    m = basis.dim
    if F.q**m > bound:
        raise RefusalError(f"unit count of an End ring of dimension {m}", F.q**m, bound)
    if m == 0:
        return 1
    a, b = basis.flat()
    units = 0
    for coeffs in _coefficient_chunks(F.q, m):
        e1 = F.lincomb(coeffs, a).reshape(len(coeffs), M.d1, M.d1)
        e2 = F.lincomb(coeffs, b).reshape(len(coeffs), M.d2, M.d2)
        ok = np.ones(len(coeffs), dtype=bool)
        if M.d1:
            ok &= batch_invertible(F, e1)
        if M.d2:
            ok &= batch_invertible(F, e2)
        units += int(np.count_nonzero(ok))
    return units


def is_indecomposable(M: KronRep, bound: int = DEFAULT_IDEMPOTENT_BOUND) -> bool:
    return endomorphism_info(M, bound).indecomposable


def is_scalar_local(M: KronRep, bound: int = DEFAULT_IDEMPOTENT_BOUND) -> bool:
    """End(M) local with residue field the ground field."""
    return endomorphism_info(M, bound).scalar_local


def restrict_to(M: KronRep, B1: np.ndarray, B2: np.ndarray) -> KronRep:
    """Representation on column bases ``B1`` of a subspace of M1 and ``B2`` of M2.

    Requires ``M_i B1`` to lie in the span of ``B2`` for every arrow.
    """
    F = M.field
    r1, r2 = B1.shape[1], B2.shape[1]
    mats = []
    for Mi in M.mats:
        if r1 == 0 or r2 == 0:
            mats.append(np.zeros((r2, r1), dtype=np.int64))
            continue
        x = la.solve(F, B2, F.matmul(Mi, B1))
        if x is None:
            raise DomainError("subspace pair is not closed under the arrows")
        mats.append(x)
    return KronRep(F, r1, r2, mats)


def _stable_power(F: GF, a: np.ndarray) -> np.ndarray:
    """``a^(2^j)`` with ``2^j >= size``, where image and kernel have stabilised."""
    p, e = a, 1
    while e < a.shape[0]:
        p = F.matmul(p, p)
        e *= 2
    return p


def _fitting_split(M: KronRep, rng: np.random.Generator, tries: int = 64):
    """Column bases of ``im f^N`` and ``ker f^N`` for a random endomorphism ``f``.

    By Fitting's lemma these two submodules are complementary; the split is
    proper whenever ``f`` is neither nilpotent nor invertible.  Returns None
    if no such ``f`` turned up.
    """
    F = M.field
    H = hom_space(M, M)
    if H.dim <= 1:
        return None
    for _ in range(tries):
        f1, f2 = (x[0] for x in H.combine(F, rng.integers(0, F.q, size=(1, H.dim))))
        p1, p2 = _stable_power(F, f1), _stable_power(F, f2)
        r = (la.rank(F, p1), la.rank(F, p2))
        if r == (0, 0) or r == M.dim:
            continue
        empty = np.zeros((0, 0), dtype=np.int64)
        im = tuple(la.image_basis(F, p) if d else empty for p, d in ((p1, M.d1), (p2, M.d2)))
        ker = tuple(la.kernel_basis(F, p) if d else empty for p, d in ((p1, M.d1), (p2, M.d2)))
        return im, ker
    return None


def decompose(
    M: KronRep, bound: int = DEFAULT_IDEMPOTENT_BOUND, rng: Optional[np.random.Generator] = None
) -> List[KronRep]:
    """Split ``M`` into indecomposable summands by repeated idempotent splitting.

    When End(M) is too large to scan, seeded Fitting splits by random
    endomorphisms are tried first; only the pieces reaching the exhaustive
    scan are certified indecomposable, so a refusal is still possible.
    """
    if M.is_zero():
        return []
    if M.field.q ** hom_space(M, M).dim > bound:
        split = _fitting_split(M, rng if rng is not None else np.random.default_rng(0))
        if split is not None:
            return [P for B1, B2 in split for P in decompose(restrict_to(M, B1, B2), bound, rng)]
    info = endomorphism_info(M, bound, rng)
    if info.indecomposable:
        return [M]
    F = M.field
    e1, e2 = info.idempotent
    parts = []
    for f1, f2 in ((e1, e2), (F.sub(np.eye(M.d1, dtype=np.int64), e1), F.sub(np.eye(M.d2, dtype=np.int64), e2))):
        B1 = la.image_basis(F, f1) if M.d1 else np.zeros((0, 0), dtype=np.int64)
        B2 = la.image_basis(F, f2) if M.d2 else np.zeros((0, 0), dtype=np.int64)
        parts.extend(decompose(restrict_to(M, B1, B2), bound, rng))
    return parts


# -- isomorphism --------------------------------------------------------------


def batch_invertible(F: GF, mats: np.ndarray) -> np.ndarray:
    """Invertibility of each matrix in a stack of shape (N, d, d)."""
    A = np.array(mats, dtype=np.int64)
    N, d = A.shape[0], A.shape[-1]
    ok = np.ones(N, dtype=bool)
    rows = np.arange(N)
    for c in range(d):
        sub = A[:, c:, c]
        has = sub.any(axis=1)
        ok &= has
        piv = c + np.argmax(sub != 0, axis=1)
        top = A[rows, c].copy()
        A[rows, c] = A[rows, piv]
        A[rows, piv] = top
        inv = F.inv(np.where(has, A[:, c, c], 1))
        A[:, c] = F.mul(A[:, c], inv[:, None])
        factors = A[:, c + 1 :, c]
        A[:, c + 1 :] = F.sub(A[:, c + 1 :], F.mul(factors[:, :, None], A[:, c, None, :]))
    return ok


def batch_rank(F: GF, mats: np.ndarray) -> np.ndarray:
    """Rank of each matrix in a stack of shape (N, r, c)."""
    A = np.array(mats, dtype=np.int64)
    N, R, C = A.shape
    rank = np.zeros(N, dtype=np.int64)
    if R == 0 or C == 0:
        return rank
    rows, idx = np.arange(N), np.arange(R)
    for c in range(C):
        cand = (idx[None, :] >= rank[:, None]) & (A[:, :, c] != 0)
        has = cand.any(axis=1)
        tgt = np.minimum(rank, R - 1)
        piv = np.where(has, np.argmax(cand, axis=1), tgt)
        top = A[rows, tgt].copy()
        A[rows, tgt] = A[rows, piv]
        A[rows, piv] = top
        inv = F.inv(np.where(has, A[rows, tgt, c], 1))
        prow = F.mul(A[rows, tgt], inv[:, None])
        below = (idx[None, :] > tgt[:, None]) & has[:, None]
        factors = np.where(below, A[:, :, c], 0)
        A = F.sub(A, F.mul(factors[:, :, None], prow[:, None, :]))
        rank += has
    return rank


def find_isomorphism(
    M: KronRep,
    N: KronRep,
    bound: int = DEFAULT_ISO_BOUND,
    trials: int = 64,
    seed: int = 0,
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """An isomorphism ``(f1, f2): M -> N`` or ``None``.

    Cheap invariants (dimensions of Hom and End spaces) refute first; seeded
    random elements of Hom(M, N) are tried next; finally the whole Hom space
    is scanned, refusing when it has more than ``bound`` elements.
    """
    _check_pair(M, N)
    if M.dim != N.dim:
        return None
    F = M.field
    if M == N:
        return (np.eye(M.d1, dtype=np.int64), np.eye(M.d2, dtype=np.int64))
    H = hom_space(M, N)
    h = H.dim
    if h == 0:
        return None if not M.is_zero() else (np.eye(0, dtype=np.int64), np.eye(0, dtype=np.int64))
    if h != end_dim(M) or h != end_dim(N) or h != hom_dim(N, M):
        return None
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(0, F.q, size=(trials, h))
    f1s, f2s = H.combine(F, coeffs)
    good = batch_invertible(F, f1s) & batch_invertible(F, f2s)
    if good.any():
        i = int(np.flatnonzero(good)[0])
        return (f1s[i], f2s[i])
    size = F.q**h
    if size > bound:
        raise RefusalError(f"isomorphism scan of a Hom space of dimension {h}", size, bound)
    for coeffs in _coefficient_chunks(F.q, h):
        f1s, f2s = H.combine(F, coeffs)
        good = batch_invertible(F, f1s) & batch_invertible(F, f2s)
        if good.any():
            i = int(np.flatnonzero(good)[0])
            return (f1s[i], f2s[i])
    return None


def is_isomorphic(M: KronRep, N: KronRep, bound: int = DEFAULT_ISO_BOUND) -> bool:
    return find_isomorphism(M, N, bound) is not None


# -- arrow space ----------------------------------------------------------------


def arrow_change(M: KronRep, g) -> KronRep:
    """Recombine the arrows: new arrow ``i`` is ``sum_j g[i, j] * arrow_j``."""
    F = M.field
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (M.n, M.n) or not la.is_invertible(F, g):
        raise DomainError("arrow change needs an invertible n x n matrix")
    flat = np.array([m.ravel() for m in M.mats], dtype=np.int64).reshape(M.n, -1)
    new = F.lincomb(g, flat)
    return KronRep(F, M.d1, M.d2, [row.reshape(M.d2, M.d1) for row in new])


def canonical_key(M: KronRep, group_bound: int = la.DEFAULT_GROUP_BOUND) -> bytes:
    """A complete isomorphism invariant: equal keys iff isomorphic.

    The group GL(M1) x GL(M2) is handled by taking the echelon form of the
    stacked arrow matrices, which absorbs one factor, and minimising over all
    elements of the other (smaller) factor.
    """
    F = M.field
    d1, d2 = M.d1, M.d2
    head = np.array([F.p, F.k, M.n, d1, d2], dtype=np.int64).astype(np.int16).tobytes()
    if d1 == 0 or d2 == 0:
        return head
    use_sink = la.gl_order(F.q, d2) <= la.gl_order(F.q, d1)
    best = None
    if use_sink:
        S = np.stack(M.mats)  # (n, d2, d1)
        for h in la.general_linear_group(F, d2, group_bound):
            T = F.matmul(h, S).reshape(M.n * d2, d1)
            R, _ = la.rref(F, T.T)
            k = R.astype(np.int16).tobytes()
            if best is None or k < best:
                best = k
        tag = b"S"
    else:
        S = np.stack(M.mats)
        for g in la.general_linear_group(F, d1, group_bound):
            T = np.hstack(list(F.matmul(S, g)))
            R, _ = la.rref(F, T)
            k = R.astype(np.int16).tobytes()
            if best is None or k < best:
                best = k
        tag = b"T"
    return head + tag + best


def _vector_codes(F: GF, n: int):
    vecs = np.array(list(itertools.product(range(F.q), repeat=n)), dtype=np.int64).reshape(F.q**n, n)
    weights = F.q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return vecs, weights


def rank_profile(M: KronRep) -> np.ndarray:
    """Rank of ``M_c`` for every arrow-space vector ``c`` (lexicographic order)."""
    F = M.field
    vecs, _ = _vector_codes(F, M.n)
    flat = np.array([m.ravel() for m in M.mats], dtype=np.int64).reshape(M.n, -1)
    combos = F.lincomb(vecs, flat).reshape(-1, M.d2, M.d1)
    return batch_rank(F, combos)


def pair_rank_profile(M: KronRep) -> np.ndarray:
    """``rank [M_c; M_c']`` for every pair of arrow-space vectors.

    Equal to ``d1 - dim(ker M_c & ker M_c')``, so it is an isomorphism
    invariant that an arrow change permutes along with the vectors.
    """
    F = M.field
    vecs, _ = _vector_codes(F, M.n)
    flat = np.array([m.ravel() for m in M.mats], dtype=np.int64).reshape(M.n, -1)
    combos = F.lincomb(vecs, flat).reshape(-1, M.d2, M.d1)
    Q = len(combos)
    stacked = np.concatenate(
        [np.broadcast_to(combos[:, None], (Q, Q, M.d2, M.d1)), np.broadcast_to(combos[None, :], (Q, Q, M.d2, M.d1))],
        axis=2,
    )
    return batch_rank(F, stacked.reshape(Q * Q, 2 * M.d2, M.d1)).reshape(Q, Q)


@functools.lru_cache(maxsize=8)
def _arrow_group_codes(F: GF, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """GL_n(F) and, per element g, the code of ``c g`` for every arrow vector ``c``."""
    vecs, weights = _vector_codes(F, n)
    group = la.general_linear_group(F, n)
    codes = np.concatenate([F.matmul(vecs[None, :, :], group[i : i + 4096]) @ weights for i in range(0, len(group), 4096)])
    return group, codes


def a_equivalent(M: KronRep, N: KronRep, max_q: int = 4) -> Optional[np.ndarray]:
    """An arrow change ``g`` with ``arrow_change(N, g)`` isomorphic to ``M``, or ``None``.

    Scans GL_n of the field, pruned by matching rank and pair-rank profiles.
    """
    _check_pair(M, N)
    F = M.field
    if F.q > max_q:
        raise RefusalError("A-equivalence scan over GL_n", F.q, max_q)
    if M.dim != N.dim:
        return None
    rM, rN = rank_profile(M), rank_profile(N)
    if not np.array_equal(np.sort(rM), np.sort(rN)):
        return None
    pM, pN = pair_rank_profile(M), pair_rank_profile(N)
    if not np.array_equal(np.sort(pM, axis=None), np.sort(pN, axis=None)):
        return None
    group, all_codes = _arrow_group_codes(F, M.n)
    key = canonical_key(M)
    Q = all_codes.shape[1]
    chunk = max(64, (1 << 22) // (Q * Q))
    for start in range(0, len(group), chunk):
        G = group[start : start + chunk]
        codes = all_codes[start : start + chunk]
        match = np.all(rN[codes] == rM[None, :], axis=1)
        hit = np.flatnonzero(match)
        if hit.size:
            c = codes[hit]
            match[hit] = np.all(pN[c[:, :, None], c[:, None, :]] == pM[None], axis=(1, 2))
        for i in np.flatnonzero(match):
            g = G[i]
            if canonical_key(arrow_change(N, g)) == key:
                return np.array(g)
    return None


# -- duality, submodules, quotients ---------------------------------------------


def dual(M: KronRep) -> KronRep:
    """The dual representation: spaces swapped, every arrow transposed."""
    return KronRep(M.field, M.d2, M.d1, [m.T for m in M.mats])


@dataclass(frozen=True, eq=False)
class SubmoduleHandle:
    """A pair of subspaces ``U1 <= M1``, ``U2 <= M2`` in canonical (RREF) form."""

    u1: np.ndarray
    piv1: Tuple[int, ...]
    u2: np.ndarray
    piv2: Tuple[int, ...]

    @property
    def dim(self) -> Tuple[int, int]:
        return (len(self.piv1), len(self.piv2))

    def key(self) -> bytes:
        return (
            np.array(self.dim, dtype=np.int16).tobytes()
            + self.u1.astype(np.int16).tobytes()
            + b"|"
            + self.u2.astype(np.int16).tobytes()
        )

    def __eq__(self, other):
        return isinstance(other, SubmoduleHandle) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SubmoduleHandle(dim={self.dim}, U1={self.u1.tolist()}, U2={self.u2.tolist()})"


def make_handle(F: GF, d1: int, d2: int, v1, v2) -> SubmoduleHandle:
    """Handle spanned by row vectors ``v1`` in M1 and ``v2`` in M2 (no closure check)."""
    v1 = np.asarray(v1, dtype=np.int64).reshape(-1, d1)
    v2 = np.asarray(v2, dtype=np.int64).reshape(-1, d2)
    u1, p1 = la.rref(F, v1)
    u2, p2 = la.rref(F, v2)
    return SubmoduleHandle(_frozen(u1), tuple(p1), _frozen(u2), tuple(p2))


def arrow_images(M: KronRep, rows: np.ndarray) -> np.ndarray:
    """Images of the row vectors ``rows`` (in M1) under all arrows, stacked as rows."""
    F = M.field
    if rows.shape[0] == 0 or M.d2 == 0:
        return np.zeros((0, M.d2), dtype=np.int64)
    return np.vstack([F.matmul(rows, Mi.T) for Mi in M.mats])


def is_closed(M: KronRep, U: SubmoduleHandle) -> bool:
    imgs = arrow_images(M, U.u1)
    if imgs.shape[0] == 0:
        return True
    return not np.any(la.reduce_mod(M.field, U.u2, U.piv2, imgs))


def sub_generated(M: KronRep, gens: Iterable) -> SubmoduleHandle:
    """The smallest submodule containing the given vectors of M1 + M2.

    Each generator is a length ``d1 + d2`` vector (its M1 part followed by its
    M2 part).  One round of arrow images suffices since paths have length <= 1.
    """
    F = M.field
    g = np.asarray(list(gens), dtype=np.int64).reshape(-1, M.d1 + M.d2)
    u1, p1 = la.rref(F, g[:, : M.d1])
    u2, p2 = la.rref(F, np.vstack([g[:, M.d1 :], arrow_images(M, u1)]))
    return SubmoduleHandle(_frozen(u1), tuple(p1), _frozen(u2), tuple(p2))


def subrep(M: KronRep, U: SubmoduleHandle) -> KronRep:
    """The submodule ``U`` as a representation in its echelon bases."""
    F = M.field
    r1, r2 = U.dim
    mats = []
    for Mi in M.mats:
        if r1 == 0 or r2 == 0:
            mats.append(np.zeros((r2, r1), dtype=np.int64))
        else:
            mats.append(F.matmul(Mi, U.u1.T)[list(U.piv2), :])
    return KronRep(F, r1, r2, mats)


def quotient(M: KronRep, U: SubmoduleHandle, check: bool = True) -> KronRep:
    """The factor module ``M/U`` on the echelon complements of ``U``."""
    if check and not is_closed(M, U):
        raise DomainError("handle is not closed under the arrows")
    F = M.field
    comp1 = [j for j in range(M.d1) if j not in U.piv1]
    comp2 = [j for j in range(M.d2) if j not in U.piv2]
    mats = []
    for Mi in M.mats:
        cols = Mi[:, comp1].T  # images of complement basis vectors, as rows
        red = la.reduce_mod(F, U.u2, U.piv2, cols) if len(comp1) else cols
        mats.append(red[:, comp2].T.reshape(len(comp2), len(comp1)))
    return KronRep(F, len(comp1), len(comp2), mats)


def restrict_k2(M: KronRep, b1, b2) -> KronRep:
    """Restriction to the 2-Kronecker subalgebra spanned by arrow vectors ``b1``, ``b2``."""
    F = M.field
    if M.n != 3:
        raise DomainError("restriction to K(2) needs a 3-arrow representation")
    b = np.array([b1, b2], dtype=np.int64)
    if la.rank(F, b) != 2:
        raise DomainError("arrow vectors must be linearly independent")
    return KronRep(F, M.d1, M.d2, [M.combination(b[0]), M.combination(b[1])])


def annihilator_space(M: KronRep) -> np.ndarray:
    """Rows: a basis of the arrow-space vectors ``c`` with ``M_c = 0``."""
    F = M.field
    E = np.array([m.ravel() for m in M.mats], dtype=np.int64).reshape(M.n, -1).T
    return la.kernel_basis(F, E).T.copy()


def faithful_annihilator(M: KronRep) -> Optional[np.ndarray]:
    """A nonzero annihilating arrow vector, or ``None`` when ``M`` is faithful."""
    if M.n != 3:
        raise DomainError("faithfulness test is defined for 3-arrow representations")
    ann = annihilator_space(M)
    return ann[0] if ann.shape[0] else None


def simple_summands(M: KronRep) -> Tuple[int, int]:
    """Multiplicities of the simple summands ``S(1)``, ``S(2)`` of ``M``.

    ``S(1)`` splits off for every dimension of the common kernel of the arrows,
    ``S(2)`` for every missing dimension of the joint image.
    """
    F = M.field
    s1 = M.d1 - la.rank(F, M.vertical()) if M.d1 else 0
    s2 = M.d2 - la.rank(F, M.horizontal()) if M.d2 else 0
    return s1, s2


# -- JSON format ----------------------------------------------------------------


def to_dict(M: KronRep) -> dict:
    """``{"p", "k", "n", "d": [d1, d2], "mats": [...]}`` with row-major integer entries."""
    return {
        "p": M.field.p,
        "k": M.field.k,
        "n": M.n,
        "d": [M.d1, M.d2],
        "mats": [m.tolist() for m in M.mats],
    }


def from_dict(obj) -> KronRep:
    from .field import get_field

    if not isinstance(obj, dict):
        raise ContractViolation("representation JSON must be an object")
    try:
        p, k, n = int(obj["p"]), int(obj.get("k", 1)), int(obj["n"])
        d1, d2 = (int(x) for x in obj["d"])
        mats = obj["mats"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractViolation(f"malformed representation JSON: {exc}") from exc
    F = get_field(p, k)
    if n not in (2, 3) or len(mats) != n:
        raise ContractViolation(f"expected {n} arrow matrices (n in 2, 3)")
    arrs = []
    for m in mats:
        try:
            a = np.array(m, dtype=np.int64).reshape(-1) if d1 * d2 else np.zeros(0, dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise ContractViolation(f"malformed arrow matrix: {exc}") from exc
        if a.size != d1 * d2:
            raise ContractViolation(f"arrow matrix does not have shape {d2} x {d1}")
        arrs.append(a.reshape(d2, d1))
    return KronRep(F, d1, d2, arrs)


def extend_scalars(M: KronRep, big: GF) -> KronRep:
    """The same matrices read over an extension of a prime field."""
    F = M.field
    if not F.is_prime or big.p != F.p:
        raise DomainError(f"cannot extend {F} to {big}")
    return KronRep(big, M.d1, M.d2, [m.copy() for m in M.mats])
