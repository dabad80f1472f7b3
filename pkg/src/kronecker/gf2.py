"""Bit-packed GF(2) elimination.

A matrix row is stored as one Python integer whose bit ``j`` is the entry in
column ``j``; rows wider than 64 columns simply span several machine words
inside the integer.  These kernels back the generic routines in
:mod:`kronecker.linalg` whenever the field is F_2 and must agree with the
table-driven path entry for entry.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np


def pack(a: np.ndarray) -> List[int]:
    a = np.asarray(a)
    rows, cols = a.shape
    if cols == 0:
        return [0] * rows
    if cols <= 62:
        weights = np.left_shift(np.int64(1), np.arange(cols, dtype=np.int64))
        return ((a & 1).astype(np.int64) @ weights).tolist()
    packed = np.packbits((a & 1).astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def unpack(rows: Sequence[int], cols: int) -> np.ndarray:
    out = np.zeros((len(rows), cols), dtype=np.int64)
    if cols == 0 or not rows:
        return out
    if cols <= 62:
        arr = np.array(rows, dtype=np.int64)
        return (arr[:, None] >> np.arange(cols, dtype=np.int64)) & 1
    nbytes = (cols + 7) // 8
    buf = np.frombuffer(b"".join(r.to_bytes(nbytes, "little") for r in rows), dtype=np.uint8)
    bits = np.unpackbits(buf.reshape(len(rows), nbytes), axis=1, bitorder="little")
    return bits[:, :cols].astype(np.int64)


def rref(rows: Sequence[int], cols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    work = list(rows)
    n = len(work)
    pivots = []
    r = 0
    for c in range(cols):
        if r == n:
            break
        bit = 1 << c
        for i in range(r, n):
            if work[i] & bit:
                break
        else:
            continue
        work[r], work[i] = work[i], work[r]
        pr = work[r]
        for j in range(n):
            if j != r and work[j] & bit:
                work[j] ^= pr
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank(rows: Sequence[int]) -> int:
    """Rank without tracking pivots (echelon by lowest set bit)."""
    basis = {}
    for v in rows:
        while v:
            low = v & -v
            b = basis.get(low)
            if b is None:
                basis[low] = v
                break
            v ^= b
    return len(basis)


def kernel(rows: Sequence[int], cols: int) -> List[int]:
    """Packed basis vectors (as length-``cols`` bit rows) of the null space."""
    red, pivots = rref(rows, cols)
    pivset = set(pivots)
    out = []
    for f in range(cols):
        if f in pivset:
            continue
        v = 1 << f
        fbit = 1 << f
        for row, pc in zip(red, pivots):
            if row & fbit:
                v |= 1 << pc
        out.append(v)
    return out


def transpose(rows: Sequence[int], cols: int) -> List[int]:
    out = []
    for c in range(cols):
        bit = 1 << c
        v = 0
        for i, r in enumerate(rows):
            if r & bit:
                v |= 1 << i
        out.append(v)
    return out
