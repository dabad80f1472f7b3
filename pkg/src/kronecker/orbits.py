"""Integer encoding of matrix tuples and orbit sweeps in index space.

A representation of dimension ``(d1, d2)`` with ``n`` arrows is the vector
of its ``L = n*d2*d1`` entries (arrow-major, then row-major); its index is
that vector read as a base-``q`` numeral, most significant digit first, so
index order is lexicographic order of matrix tuples.

Group actions are linear on that vector space.  Over F_2 a linear map is
applied to a whole array of indices with one XOR of byte-table lookups per
byte; for other fields, when ``q^L`` is small, the action of each generator
is tabulated as a permutation of all indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .errors import RefusalError
from .field import GF
from .rep import KronRep

MAX_PERMUTATION_SIZE = 1 << 22
MAX_INDEX_SPACE = 1 << 28


@dataclass(frozen=True)
class Layout:
    field: GF
    n: int
    d1: int
    d2: int

    @property
    def length(self) -> int:
        return self.n * self.d1 * self.d2

    @property
    def size(self) -> int:
        return self.field.q**self.length

    def weights(self) -> np.ndarray:
        return self.field.q ** np.arange(self.length - 1, -1, -1, dtype=np.int64)

    def digits(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.weights()) % self.field.q

    def encode_digits(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.weights()

    def decode(self, idx: int) -> KronRep:
        d = self.digits(np.array([idx]))[0].reshape(self.n, self.d2, self.d1)
        return KronRep(self.field, self.d1, self.d2, list(d))

    def encode(self, M: KronRep) -> int:
        flat = np.concatenate([m.ravel() for m in M.mats]) if self.length else np.zeros(0, dtype=np.int64)
        return int(flat @ self.weights())


def module_action(layout: Layout, g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Matrix of ``M_i -> g2 M_i g1`` on the entry vector."""
    F = layout.field
    blk = F.kron(g2, np.asarray(g1).T)
    return F.kron(np.eye(layout.n, dtype=np.int64), blk)


def arrow_action(layout: Layout, g: np.ndarray) -> np.ndarray:
    """Matrix of ``M_i -> sum_j g_ij M_j`` on the entry vector."""
    F = layout.field
    return F.kron(g, np.eye(layout.d1 * layout.d2, dtype=np.int64))


def group_generators(layout: Layout, with_arrows: bool = False) -> List[np.ndarray]:
    F = layout.field
    gens = []
    for g in la.gl_generators(F, layout.d1):
        gens.append(module_action(layout, g, np.eye(layout.d2, dtype=np.int64)))
    for h in la.gl_generators(F, layout.d2):
        gens.append(module_action(layout, np.eye(layout.d1, dtype=np.int64), h))
    if with_arrows:
        for g in la.gl_generators(F, layout.n):
            gens.append(arrow_action(layout, g))
    return gens


class IndexMap:
    """A linear map of F_q^L applied to arrays of indices."""

    def __init__(self, layout: Layout, K: np.ndarray):
        self.layout = layout
        F = layout.field
        L = layout.length
        if F.q == 2:
            # tables[b][v] = image of the bits v placed in byte b of the index
            self.nbytes = (L + 7) // 8
            self.tables = []
            w = layout.weights()
            for b in range(self.nbytes):
                vals = np.arange(256, dtype=np.int64)
                bits = np.zeros((256, L), dtype=np.int64)
                for k in range(8):
                    pos = 8 * b + k  # bit position = L - 1 - digit
                    if pos < L:
                        bits[:, L - 1 - pos] = (vals >> k) & 1
                img = F.matmul(bits, K.T) @ w
                self.tables.append(img.astype(np.int64))
            self.perm = None
        else:
            if layout.size > MAX_PERMUTATION_SIZE:
                raise RefusalError("index permutation table", layout.size, MAX_PERMUTATION_SIZE)
            self.perm = np.empty(layout.size, dtype=np.int64)
            step = 1 << 16
            for s in range(0, layout.size, step):
                idx = np.arange(s, min(layout.size, s + step), dtype=np.int64)
                self.perm[s : s + len(idx)] = layout.encode_digits(F.matmul(layout.digits(idx), K.T))

    def __call__(self, idx: np.ndarray) -> np.ndarray:
        if self.perm is not None:
            return self.perm[idx]
        out = self.tables[0][idx & 255]
        for b in range(1, self.nbytes):
            out = out ^ self.tables[b][(idx >> (8 * b)) & 255]
        return out


def orbit(maps: Sequence[IndexMap], start: int, visited: np.ndarray) -> np.ndarray:
    """All indices reachable from ``start``; marks them in ``visited``."""
    frontier = np.array([start], dtype=np.int64)
    visited[start] = True
    members = [frontier]
    while frontier.size:
        new = []
        for f in maps:
            img = f(frontier)
            img = img[~visited[img]]
            if img.size:
                img = np.unique(img)
                visited[img] = True
                new.append(img)
        frontier = np.concatenate(new) if new else np.zeros(0, dtype=np.int64)
        if frontier.size:
            members.append(frontier)
    return np.concatenate(members)


def orbit_mask(layout: Layout, starts: Sequence[int], with_arrows: bool) -> np.ndarray:
    """Boolean mask of the union of the orbits of ``starts``."""
    _check_space(layout)
    maps = [IndexMap(layout, K) for K in group_generators(layout, with_arrows)]
    visited = np.zeros(layout.size, dtype=bool)
    for s in starts:
        if not visited[s]:
            orbit(maps, int(s), visited)
    return visited


def _check_space(layout: Layout):
    if layout.size > MAX_INDEX_SPACE:
        raise RefusalError("index-space sweep", layout.size, MAX_INDEX_SPACE)


def orbit_sweep(layout: Layout, progress: Optional[Callable[[int], None]] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Orbit representatives (smallest index of each orbit) and orbit sizes.

    Every index of the space is visited exactly once; the sizes therefore
    sum to ``q^L``.
    """
    _check_space(layout)
    maps = [IndexMap(layout, K) for K in group_generators(layout)]
    visited = np.zeros(layout.size, dtype=bool)
    reps, sizes = [], []
    pos = 0
    chunk = 1 << 16
    while pos < layout.size:
        window = visited[pos : pos + chunk]
        free = np.flatnonzero(~window)
        if free.size == 0:
            pos += chunk
            continue
        i = pos + int(free[0])
        members = orbit(maps, i, visited)
        reps.append(i)
        sizes.append(members.size)
        pos = i + 1
        if progress is not None:
            progress(len(reps))
    return np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)


def orbit_size(F: GF, M: KronRep) -> int:
    """|GL(d1) x GL(d2)| / |Aut(M)|, without visiting the orbit."""
    from .rep import automorphism_count

    return la.gl_order(F.q, M.d1) * la.gl_order(F.q, M.d2) // automorphism_count(M)


def orbit_members(layout: Layout, start: int) -> np.ndarray:
    _check_space(layout)
    maps = [IndexMap(layout, K) for K in group_generators(layout)]
    visited = np.zeros(layout.size, dtype=bool)
    return np.sort(orbit(maps, start, visited))
