"""Small finite fields F_{p^k} with table-driven arithmetic.

Elements are the integers ``0 .. q-1``.  For ``k > 1`` an element
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` of ``F_p[x]/(f)`` is encoded as
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` (the monomial encoding used by the
JSON representation format), with ``f`` the Conway polynomial.

All vectorised operations accept numpy integer arrays of any shape.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import DomainError

PRIMES = (2, 3, 5, 7)
MAX_DEGREE = 3

# Conway polynomials, coefficients listed from the constant term upwards.
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}


class GF:
    """The finite field with ``p**k`` elements.

    Use :func:`get_field` rather than the constructor so instances are shared.
    """

    def __init__(self, p: int, k: int = 1):
        if p not in PRIMES or not 1 <= k <= MAX_DEGREE:
            raise DomainError(f"unsupported field F_{p}^{k}: need p in {PRIMES}, 1 <= k <= {MAX_DEGREE}")
        self.p = p
        self.k = k
        self.q = p**k
        self.is_prime = k == 1
        self.modulus = CONWAY.get((p, k), (0, 1))
        self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        digits = np.array([[(a // p**i) % p for i in range(k)] for a in range(q)], dtype=np.int64)
        weights = p ** np.arange(k, dtype=np.int64)
        add = (digits[:, None, :] + digits[None, :, :]) % p
        self._add = (add @ weights).astype(np.int64)
        self._neg = ((-digits) % p) @ weights
        if self.is_prime:
            mul = np.outer(np.arange(q), np.arange(q)) % p
        else:
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(q):
                    mul[a, b] = self._polymul(digits[a], digits[b]) @ weights
        self._mul = mul.astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(self._mul[a] == 1)[0])
        self._inv = inv
        # plain-list copies for scalar hot loops
        self.add_list = self._add.tolist()
        self.mul_list = self._mul.tolist()
        self.neg_list = self._neg.tolist()
        self.inv_list = self._inv.tolist()

    def _polymul(self, a, b):
        p, k = self.p, self.k
        prod = np.zeros(2 * k - 1, dtype=np.int64)
        for i in range(k):
            prod[i : i + k] += a[i] * b
        prod %= p
        f = np.array(self.modulus, dtype=np.int64)
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg - k : deg + 1] = (prod[deg - k : deg + 1] - c * f) % p
        return prod[:k]

    # -- identity ---------------------------------------------------------
    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __reduce__(self):
        return (get_field, (self.p, self.k))

    # -- elementwise ------------------------------------------------------
    def add(self, a, b):
        if self.is_prime:
            return (np.asarray(a) + b) % self.p
        return self._add[a, b]

    def sub(self, a, b):
        if self.is_prime:
            return (np.asarray(a) - b) % self.p
        return self._add[a, self._neg[b]]

    def neg(self, a):
        if self.is_prime:
            return (-np.asarray(a)) % self.p
        return self._neg[a]

    def mul(self, a, b):
        if self.is_prime:
            return (np.asarray(a) * b) % self.p
        return self._mul[a, b]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._inv[a]

    # -- array algebra ------------------------------------------------------
    def matmul(self, a, b):
        """Matrix product with numpy broadcasting over leading axes."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return (a @ b) % self.p
        inner = a.shape[-1]
        out_shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        out = np.zeros(out_shape, dtype=np.int64)
        for t in range(inner):
            out = self._add[out, self._mul[a[..., :, t, None], b[..., None, t, :]]]
        return out

    def lincomb(self, coeffs, basis):
        """Rows of ``coeffs`` (N x m) combine the m rows of ``basis`` (m x L)."""
        coeffs = np.asarray(coeffs, dtype=np.int64)
        basis = np.asarray(basis, dtype=np.int64)
        if self.is_prime:
            return (coeffs @ basis) % self.p
        out = np.zeros((coeffs.shape[0], basis.shape[1]), dtype=np.int64)
        for i in range(basis.shape[0]):
            out = self._add[out, self._mul[coeffs[:, i, None], basis[None, i, :]]]
        return out

    def kron(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return np.kron(a, b) % self.p
        prod = self._mul[a[:, None, :, None], b[None, :, None, :]]
        return prod.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])

    def identity(self, n: int):
        return np.eye(n, dtype=np.int64)

    def zeros(self, rows: int, cols: int):
        return np.zeros((rows, cols), dtype=np.int64)

    def elements(self):
        return range(self.q)

    def nonzero(self):
        return range(1, self.q)

    @property
    def primitive(self) -> int:
        """A generator of the multiplicative group."""
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = self.mul_list[x][g]
                order += 1
            if order == self.q - 1:
                return g
        return 1

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int):
        return rng.integers(0, self.q, size=(rows, cols), dtype=np.int64)


@lru_cache(maxsize=None)
def get_field(p: int, k: int = 1) -> GF:
    return GF(p, k)


def field_of_order(q: int) -> GF:
    for p in PRIMES:
        for k in range(1, MAX_DEGREE + 1):
            if p**k == q:
                return get_field(p, k)
    raise DomainError(f"no supported field of order {q}")
