import numpy as np
import pytest

from jcphonon import DEFAULT_PARAMS, FockTruncation


@pytest.fixture
def params():
    """Reference parameter set (resonant exciton, weak incoherent pump)."""
    return DEFAULT_PARAMS


@pytest.fixture
def small_trunc():
    return FockTruncation(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_density_matrix(rng, dim):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = A @ A.conj().T
    return rho / np.trace(rho)


def random_hermitian(rng, dim):
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (A + A.conj().T)
