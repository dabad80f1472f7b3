import itertools

import numpy as np
import pytest

from kronecker.field import get_field
from kronecker.rep import KronRep


@pytest.fixture(scope="session")
def F2():
    return get_field(2)


@pytest.fixture(scope="session")
def F3():
    return get_field(3)


def all_reps(F, d1, d2, n=3):
    """Every n-tuple of d2 x d1 matrices over F, in lexicographic order."""
    L = n * d1 * d2
    for digits in itertools.product(range(F.q), repeat=L):
        yield KronRep(F, d1, d2, np.array(digits, dtype=np.int64).reshape(n, d2, d1))


@pytest.fixture(scope="session")
def census22(F2):
    return list(all_reps(F2, 2, 2))


def random_rep(F, rng, d1, d2, n=3):
    return KronRep(F, d1, d2, rng.integers(0, F.q, size=(n, d2, d1)))


def random_invertible(F, rng, d):
    from kronecker import linalg as la

    while True:
        g = F.random_matrix(rng, d, d)
        if la.is_invertible(F, g):
            return g
