import math

import numpy as np
import pytest

from proctensor import DensityMatrix


def random_density(rng: np.random.Generator, dims, rank: int | None = None) -> DensityMatrix:
    """Random full(or fixed)-rank density matrix from a Ginibre factor."""
    dims = tuple(dims)
    dim = math.prod(dims)
    r = dim if rank is None else rank
    g = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    mat = g @ g.conj().T
    return DensityMatrix(mat / np.trace(mat).real, dims)


def random_pure(rng: np.random.Generator, dims) -> DensityMatrix:
    dims = tuple(dims)
    dim = math.prod(dims)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), dims)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
