"""Exact dense linear algebra over a :class:`~kronecker.field.GF`.

Matrices are 2-D ``int64`` numpy arrays with entries in ``0 .. q-1``;
zero-row and zero-column shapes are legal.  Subspaces are represented by
their reduced row echelon basis (rows), which is the canonical form used for
every deduplication key in the package.
"""

from __future__ import annotations

import contextlib
import itertools
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from .errors import ContractViolation, RefusalError
from .field import GF

DEFAULT_SUBSPACE_BOUND = 2**24

_use_packed = True


@contextlib.contextmanager
def packed_f2(enabled: bool):
    """Temporarily switch the F_2 bit-packed backend on or off."""
    global _use_packed
    old = _use_packed
    _use_packed = enabled
    try:
        yield
    finally:
        _use_packed = old


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2:
        raise ContractViolation(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def _rref_packed(a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    rows, pivots = gf2.rref(gf2.pack(a), a.shape[1])
    return gf2.unpack(rows, a.shape[1]), pivots


def _rref_small(F: GF, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    add, mul, neg, inv = F.add_list, F.mul_list, F.neg_list, F.inv_list
    work = a.tolist()
    m = len(work)
    n = a.shape[1]
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r, m):
            if work[i][c]:
                break
        else:
            continue
        work[r], work[i] = work[i], work[r]
        s = inv[work[r][c]]
        if s != 1:
            mrow = mul[s]
            work[r] = [mrow[x] for x in work[r]]
        pr = work[r]
        for j in range(m):
            f = work[j][c]
            if j != r and f:
                nf = mul[neg[f]]
                work[j] = [add[x][nf[y]] for x, y in zip(work[j], pr)]
        pivots.append(c)
        r += 1
    return np.array(work[:r], dtype=np.int64).reshape(r, n), pivots


def _rref_numpy(F: GF, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    A = a.copy()
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = F.mul(A[r], F.inv(A[r, c]))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = F.sub(A[hit], F.mul(col[hit, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rref(F: GF, a) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form: (nonzero rows, pivot column indices)."""
    a = _as_matrix(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64), []
    if F.q == 2 and _use_packed:
        return _rref_packed(a)
    if a.size <= 400:
        return _rref_small(F, a)
    return _rref_numpy(F, a)


def rank(F: GF, a) -> int:
    a = _as_matrix(a)
    if a.size == 0:
        return 0
    if F.q == 2 and _use_packed:
        return gf2.rank(gf2.pack(a))
    return len(rref(F, a)[1])


def kernel_basis(F: GF, a) -> np.ndarray:
    """Columns form a basis of ``{x : a x = 0}``."""
    a = _as_matrix(a)
    n = a.shape[1]
    R, pivots = rref(F, a)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((n, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, pc in enumerate(pivots):
            K[pc, j] = F.neg_list[int(R[i, f])]
    return K


def image_basis(F: GF, a) -> np.ndarray:
    """Columns form a basis of the column space of ``a``."""
    a = _as_matrix(a)
    R, _ = rref(F, a.T)
    return R.T.copy()


def solve(F: GF, a, rhs) -> Optional[np.ndarray]:
    """One solution ``x`` of ``a x = rhs`` or ``None`` when inconsistent."""
    a = _as_matrix(a)
    rhs = np.asarray(rhs, dtype=np.int64)
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs[:, None]
    if rhs.shape[0] != a.shape[0]:
        raise ContractViolation(f"solve: {a.shape} matrix with right-hand side of {rhs.shape[0]} rows")
    n = a.shape[1]
    R, pivots = rref(F, np.hstack([a, rhs]))
    if pivots and pivots[-1] >= n:
        return None
    x = np.zeros((n, rhs.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n:]
    return x[:, 0] if vector else x


def cokernel_projection(F: GF, a) -> Tuple[np.ndarray, int]:
    """A surjection ``P`` from the codomain whose kernel is the image of ``a``."""
    a = _as_matrix(a)
    P = kernel_basis(F, a.T).T.copy()
    return P, P.shape[0]


def inverse(F: GF, a) -> np.ndarray:
    a = _as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ContractViolation("inverse of a non-square matrix")
    R, pivots = rref(F, np.hstack([a, F.identity(n)]))
    if len(pivots) < n or pivots[n - 1] >= n:
        raise ContractViolation("matrix is singular")
    return R[:, n:].copy()


def is_invertible(F: GF, a) -> bool:
    a = _as_matrix(a)
    return a.shape[0] == a.shape[1] and rank(F, a) == a.shape[0]


# -- subspaces --------------------------------------------------------------


def span(F: GF, vectors) -> Tuple[np.ndarray, List[int]]:
    """Canonical basis (RREF rows, pivots) of the span of the given row vectors."""
    return rref(F, vectors)


def contains(F: GF, basis: np.ndarray, pivots: Sequence[int], v) -> bool:
    """Whether the row vector ``v`` lies in the RREF-spanned subspace."""
    return not np.any(reduce_mod(F, basis, pivots, np.asarray(v, dtype=np.int64)[None, :]))


def reduce_mod(F: GF, basis: np.ndarray, pivots: Sequence[int], vectors: np.ndarray) -> np.ndarray:
    """Reduce row vectors modulo an RREF basis; pivot entries become zero."""
    vectors = np.asarray(vectors, dtype=np.int64)
    if not len(pivots) or vectors.size == 0:
        return vectors.copy()
    coeffs = vectors[:, list(pivots)]
    return F.sub(vectors, F.matmul(coeffs, basis))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(dim: int, q: int) -> int:
    return sum(gaussian_binomial(dim, k, q) for k in range(dim + 1))


def _check_bound(what: str, size: int, bound: int):
    if size > bound:
        raise RefusalError(what, size, bound)


def enumerate_subspaces(
    F: GF, dim: int, bound: int = DEFAULT_SUBSPACE_BOUND, dims: Optional[Sequence[int]] = None
) -> Iterator[np.ndarray]:
    """Yield every subspace of ``F^dim`` once, as its RREF basis (k x dim).

    Order: by dimension, then pivot positions, then free entries
    lexicographically.  ``dims`` restricts the subspace dimensions.
    """
    _check_bound("subspace enumeration", F.q**dim, bound)
    for k in range(dim + 1) if dims is None else dims:
        for piv in itertools.combinations(range(dim), k):
            pivset = set(piv)
            free = [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, dim) if j not in pivset]
            base = np.zeros((k, dim), dtype=np.int64)
            for i, pc in enumerate(piv):
                base[i, pc] = 1
            for fill in itertools.product(range(F.q), repeat=len(free)):
                m = base.copy()
                for (i, j), v in zip(free, fill):
                    m[i, j] = v
                yield m


@lru_cache(maxsize=None)
def _points(F: GF, dim: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in m[0]) for m in enumerate_subspaces(F, dim, dims=(1,)))


def projective_points(F: GF, dim: int) -> np.ndarray:
    """Normalised representatives of the 1-dimensional subspaces of ``F^dim``.

    The first nonzero coordinate is 1; ordered by its position, then the
    trailing coordinates lexicographically, so ``(1, 0)`` precedes ``(0, 1)``.
    """
    pts = _points(F, dim)
    return np.array(pts, dtype=np.int64).reshape(len(pts), dim)


def superspaces(F: GF, W: np.ndarray, pivots: Sequence[int], dim: int, bound: int = DEFAULT_SUBSPACE_BOUND):
    """Yield (RREF basis, pivots) of every subspace of ``F^dim`` containing ``W``."""
    rest = [c for c in range(dim) if c not in set(pivots)]
    for S in enumerate_subspaces(F, len(rest), bound):
        lifted = np.zeros((S.shape[0], dim), dtype=np.int64)
        lifted[:, rest] = S
        yield rref(F, np.vstack([W, lifted]))


# -- general linear groups --------------------------------------------------

DEFAULT_GROUP_BOUND = 500_000


def gl_order(q: int, d: int) -> int:
    out = 1
    for i in range(d):
        out *= q**d - q**i
    return out


_GL_CACHE = {}


def general_linear_group(F: GF, d: int, bound: int = DEFAULT_GROUP_BOUND) -> np.ndarray:
    """All invertible ``d x d`` matrices as an array of shape (|GL|, d, d)."""
    key = (F, d)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    _check_bound(f"GL_{d}(F_{F.q})", gl_order(F.q, d), bound)
    vecs = np.array(list(itertools.product(range(F.q), repeat=d)), dtype=np.int64).reshape(F.q**d, d)
    weights = F.q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    partial = [np.zeros((0, d), dtype=np.int64)]
    for k in range(d):
        coeffs = np.array(list(itertools.product(range(F.q), repeat=k)), dtype=np.int64).reshape(F.q**k, k)
        nxt = []
        for rows in partial:
            inside = set((F.lincomb(coeffs, rows) @ weights).tolist()) if k else {0}
            for v in vecs:
                if int(v @ weights) not in inside:
                    nxt.append(np.vstack([rows, v]))
        partial = nxt
    out = np.array(partial, dtype=np.int64).reshape(-1, d, d)
    out.setflags(write=False)
    _GL_CACHE[key] = out
    return out


def gl_generators(F: GF, d: int) -> List[np.ndarray]:
    """A generating set of GL_d: a primitive diagonal, two permutations, a transvection."""
    gens = []
    if d == 0:
        return gens
    w = F.primitive
    if w != 1:
        g = F.identity(d)
        g[0, 0] = w
        gens.append(g)
    if d >= 2:
        swap = F.identity(d)[[1, 0] + list(range(2, d))]
        cycle = F.identity(d)[list(range(1, d)) + [0]]
        trans = F.identity(d)
        trans[0, 1] = 1
        gens.extend([swap, trans])
        if d > 2:
            gens.append(cycle)
    return gens
