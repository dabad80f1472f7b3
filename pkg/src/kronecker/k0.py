"""Arithmetic in the Grothendieck group Z^2 of the 3-Kronecker algebra.

Vectors are plain ``(x, y)`` integer tuples.  The shift ``sigma`` and its
inverse are the dimension-vector shadows of the reflection functors in
:mod:`kronecker.bgp`; ``delta`` is the shadow of duality.
"""

from __future__ import annotations

import enum
from collections import deque
from typing import List, Tuple

from .errors import DomainError, SearchExhausted

Vec = Tuple[int, int]

SIGMA = "sigma"
SIGMA_INV = "sigma_inv"
DELTA = "delta"
WORD_SYMBOLS = {SIGMA: "σ", SIGMA_INV: "σ⁻", DELTA: "δ"}
DEFAULT_DEPTH = 64


def sigma_dim(v: Vec, n: int = 3) -> Vec:
    x, y = v
    return (n * x - y, x)


def sigma_inv_dim(v: Vec, n: int = 3) -> Vec:
    x, y = v
    return (y, n * y - x)


def delta(v: Vec) -> Vec:
    x, y = v
    return (y, x)


def tits_q(v: Vec, n: int = 3) -> int:
    x, y = v
    return x * x + y * y - n * x * y


def bilinear(d: Vec, e: Vec, n: int = 3) -> int:
    """The Euler form: dim Hom(D, E) - dim Ext(D, E) for modules of these dimensions."""
    return d[0] * e[0] + d[1] * e[1] - n * d[0] * e[1]


def is_regular_dim(v: Vec) -> bool:
    return tits_q(v) < 0


def in_fundamental_domain(v: Vec) -> bool:
    x, y = v
    return 2 * x <= 3 * y and y <= x


_STEPS = ((DELTA, delta), (SIGMA_INV, sigma_inv_dim), (SIGMA, sigma_dim))


def apply_word(v: Vec, word: List[str]) -> Vec:
    fns = dict(_STEPS)
    for s in word:
        v = fns[s](v)
    return v


def reduce_to_F(v: Vec, depth: int = DEFAULT_DEPTH) -> Tuple[Vec, List[str]]:
    """Move a regular vector into ``F = {2x <= 3y, y <= x}`` by sigma, its inverse and delta.

    Breadth-first over words (shortest first; ties broken by the generator
    order delta, sigma^-1, sigma), so the returned word is a shortest one.
    """
    v = (int(v[0]), int(v[1]))
    if not is_regular_dim(v):
        raise DomainError(f"{v} is not a regular dimension vector")
    if in_fundamental_domain(v):
        return v, []
    seen = {v: None}
    queue = deque([v])
    level = {v: 0}
    while queue:
        cur = queue.popleft()
        if level[cur] >= depth:
            continue
        for name, fn in _STEPS:
            nxt = fn(cur)
            if nxt in seen:
                continue
            seen[nxt] = (cur, name)
            level[nxt] = level[cur] + 1
            if in_fundamental_domain(nxt):
                word = []
                node = nxt
                while seen[node] is not None:
                    node, step = seen[node]
                    word.append(step)
                return nxt, word[::-1]
            queue.append(nxt)
    raise SearchExhausted(f"no word of length <= {depth} moves {v} into the fundamental domain")


class SigmaType(enum.Enum):
    BRISTLE = "bristle"
    X = "X"

    def __str__(self):
        return self.value


def sigma_type(v: Vec):
    """``SigmaType.BRISTLE`` for the orbit of (1,1), ``SigmaType.X`` for that of (2,2), else ``None``."""
    w, _ = reduce_to_F(v)
    return {(1, 1): SigmaType.BRISTLE, (2, 2): SigmaType.X}.get(w)


def exists_elementary_dim(v: Vec) -> bool:
    return is_regular_dim(v) and tits_q(v) in (-1, -4)


def preprojective_dims(total: int, n: int = 3) -> List[Vec]:
    """Dimension vectors of the indecomposable preprojectives of total dimension <= ``total``."""
    out = []
    v = (0, 1)
    while v[0] + v[1] <= total:
        out.append(v)
        v = sigma_inv_dim(v, n)
        if v[0] + v[1] <= out[-1][0] + out[-1][1]:
            break  # n <= 1: finite type, no growth
    return out
