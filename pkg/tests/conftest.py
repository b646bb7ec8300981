import numpy as np
import pytest

from plexsim import build_basis, default_parameters


@pytest.fixture
def set1():
    return default_parameters(1)


@pytest.fixture
def set2():
    return default_parameters(2)


@pytest.fixture
def basis_1dot():
    return build_basis(1, 5)


@pytest.fixture
def basis_2dot():
    return build_basis(2, 5)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_density_matrix(rng, dim):
    """Random valid density matrix (Hermitian, trace 1, PSD)."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
