"""Named representations, built from coefficient quivers with all coefficients 1.

Arrow indices: 0, 1, 2 stand for the basis arrows alpha, beta, gamma.
Top vertices are basis vectors of M1, bottom vertices basis vectors of M2.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .field import GF
from .rep import KronRep

Edge = Tuple[int, int, int]  # (top vertex, bottom vertex, arrow index)


@dataclass(frozen=True)
class CoeffQuiverSpec:
    top: int
    bottom: int
    edges: Tuple[Edge, ...] = ()
    n: int = 3

    def validate(self):
        if self.top < 0 or self.bottom < 0 or self.n < 1:
            raise DomainError("vertex and arrow counts must be non-negative")
        seen = set()
        for s, t, a in self.edges:
            if not (0 <= s < self.top and 0 <= t < self.bottom and 0 <= a < self.n):
                raise DomainError(f"edge {(s, t, a)} out of range")
            if (s, t, a) in seen:
                raise DomainError(f"duplicate edge {(s, t, a)}")
            seen.add((s, t, a))


def from_coeff_quiver(spec: CoeffQuiverSpec, F: GF) -> KronRep:
    spec.validate()
    mats = [np.zeros((spec.bottom, spec.top), dtype=np.int64) for _ in range(spec.n)]
    for s, t, a in spec.edges:
        mats[a][t, s] = 1
    return KronRep(F, spec.top, spec.bottom, mats)


def _check_arrow(i: int, n: int = 3):
    if not 0 <= i < n:
        raise DomainError(f"arrow index {i} out of range 0..{n - 1}")


def build_S1(F: GF, n: int = 3) -> KronRep:
    return from_coeff_quiver(CoeffQuiverSpec(1, 0, (), n), F)


def build_S2(F: GF, n: int = 3) -> KronRep:
    return from_coeff_quiver(CoeffQuiverSpec(0, 1, (), n), F)


def build_P1(F: GF, n: int = 3) -> KronRep:
    """The projective cover of S(1): one top vertex sending arrow i to bottom vertex i."""
    return from_coeff_quiver(CoeffQuiverSpec(1, n, tuple((0, i, i) for i in range(n)), n), F)


def build_B(F: GF, i: int) -> KronRep:
    """The bristle annihilated by the two arrows other than ``i``."""
    _check_arrow(i)
    return from_coeff_quiver(CoeffQuiverSpec(1, 1, ((0, 0, i),)), F)


def build_V(F: GF, i: int, j: int) -> KronRep:
    """Dimension (2,1): arrow ``i`` on the first top vertex, ``j`` on the second; simple socle."""
    _check_arrow(i)
    _check_arrow(j)
    if i == j:
        raise DomainError("V needs two distinct arrows")
    return from_coeff_quiver(CoeffQuiverSpec(2, 1, ((0, 0, i), (1, 0, j))), F)


# X: top u = e0, v = e1; bottom w0, w1.  alpha = identity, beta(a,b) = (b,0), gamma(a,b) = (0,a).
X_EDGES = ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 2))


def build_X(F: GF) -> KronRep:
    return from_coeff_quiver(CoeffQuiverSpec(2, 2, X_EDGES), F)


# Y: four top vertices t0..t3 over two bottom vertices; the middle top pair
# (t1, t2) carries the X pattern, the outer vertices close it up.
Y_EDGES = ((1, 0, 0), (2, 1, 0), (2, 0, 1), (3, 1, 1), (0, 0, 2), (1, 1, 2))


def build_Y(F: GF) -> KronRep:
    return from_coeff_quiver(CoeffQuiverSpec(4, 2, Y_EDGES), F)


NONELEM_LEFT_EDGES = ((0, 0, 0), (1, 0, 1), (1, 1, 2))
NONELEM_RIGHT_EDGES = ((0, 0, 0), (1, 1, 0), (1, 0, 1))


def build_nonelem_tree(F: GF, variant: str) -> KronRep:
    """The two (2,2) tree modules that fail to be elementary.

    ``left`` is faithful (arrows alpha, beta, gamma on a path); ``right`` is
    annihilated by gamma (arrows alpha, beta, alpha on a path).
    """
    edges = {"left": NONELEM_LEFT_EDGES, "right": NONELEM_RIGHT_EDGES}.get(variant)
    if edges is None:
        raise DomainError(f"unknown variant {variant!r}; expected 'left' or 'right'")
    return from_coeff_quiver(CoeffQuiverSpec(2, 2, edges), F)


# (3,3) module with factor X and kernel B(gamma); top t0..t2, bottom b0..b2.
EXAMPLE_M_EDGES = ((1, 1, 0), (2, 2, 0), (1, 0, 1), (2, 1, 1), (0, 0, 2), (1, 2, 2))
# (4,3) module with submodule X and factor V(alpha, beta).
EXAMPLE_N_EDGES = ((1, 0, 0), (2, 1, 0), (3, 2, 0), (0, 0, 1), (1, 1, 1), (3, 1, 1), (2, 2, 2))


def build_example_M(F: GF) -> KronRep:
    return from_coeff_quiver(CoeffQuiverSpec(3, 3, EXAMPLE_M_EDGES), F)


def build_example_N(F: GF) -> KronRep:
    return from_coeff_quiver(CoeffQuiverSpec(4, 3, EXAMPLE_N_EDGES), F)


def build_I(F: GF, i: int) -> KronRep:
    """``sigma^i S(1)``: the indecomposable preinjectives, of dimension (1,0), (3,1), (8,3), ..."""
    from .bgp import sigma_rep

    if not 0 <= i <= 10:
        raise DomainError("preinjective index must lie in 0..10")
    M = build_S1(F)
    for _ in range(i):
        M = sigma_rep(M)
    return M


def build_k2_regular_R(F: GF, t: int) -> KronRep:
    """The 2-Kronecker module (F^t, F^t; identity, nilpotent Jordan block).

    Uniserial regular of length ``t`` with socle (k, k; 1, 0); its coefficient
    quiver in the standard bases is a path through all 2t vertices.
    """
    if t < 1:
        raise DomainError("t must be positive")
    a = np.eye(t, dtype=np.int64)
    b = np.eye(t, k=1, dtype=np.int64)
    return KronRep(F, t, t, [a, b])


ZooBuilder = Callable[..., KronRep]

ZOO: Dict[str, Tuple[ZooBuilder, int, str]] = {
    "X": (build_X, 0, "dimension (2,2); arrows identity, (a,b)->(b,0), (a,b)->(0,a)"),
    "Y": (build_Y, 0, "dimension (4,2); sigma of X"),
    "B": (build_B, 1, "B:i, bristle (1,1) carried by arrow i"),
    "V": (build_V, 2, "V:i,j, dimension (2,1) with simple socle, arrows i and j"),
    "S1": (build_S1, 0, "simple injective, dimension (1,0)"),
    "S2": (build_S2, 0, "simple projective, dimension (0,1)"),
    "P1": (build_P1, 0, "projective cover of S1, dimension (1,3)"),
    "I": (build_I, 1, "I:i, preinjective sigma^i S1"),
    "TREE_LEFT": (lambda F: build_nonelem_tree(F, "left"), 0, "faithful non-elementary (2,2) tree module"),
    "TREE_RIGHT": (lambda F: build_nonelem_tree(F, "right"), 0, "(2,2) tree module annihilated by gamma"),
    "EXAMPLE_M": (build_example_M, 0, "dimension (3,3), extension of X by B(gamma)"),
    "EXAMPLE_N": (build_example_N, 0, "dimension (4,3), extension of V(alpha,beta) by X"),
    "R": (build_k2_regular_R, 1, "R:t, 2-Kronecker regular of dimension (t,t)"),
}


def parse_name(name: str) -> Tuple[str, List[int]]:
    head, _, tail = name.partition(":")
    head = head.upper()
    if head not in ZOO:
        raise DomainError(f"unknown zoo name {head!r}; known: {', '.join(ZOO)}")
    try:
        args = [int(x) for x in tail.split(",")] if tail else []
    except ValueError as exc:
        raise DomainError(f"bad parameters in {name!r}") from exc
    if len(args) != ZOO[head][1]:
        raise DomainError(f"{head} takes {ZOO[head][1]} parameter(s), got {len(args)}")
    return head, args


def build(name: str, F: GF) -> KronRep:
    head, args = parse_name(name)
    return ZOO[head][0](F, *args)
