import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_density(rng, dim=4):
    """Ginibre-random density matrix."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_hermitian_unit_trace(rng, dim=4):
    """Hermitian, unit-trace, not necessarily positive."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = 0.5 * (a + a.conj().T)
    h = h - (np.trace(h).real - 1.0) / dim * np.eye(dim)
    return h
