import numpy as np
import pytest

from packbound.geometry.space import SpaceSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def g12():
    return SpaceSpec.grassmann(1, 2)


@pytest.fixture
def v12():
    return SpaceSpec.stiefel(1, 2)


@pytest.fixture
def u2():
    return SpaceSpec.unitary(2)


@pytest.fixture
def v24():
    return SpaceSpec.stiefel(2, 4)


def random_skew_hermitian(rng, k, scale=1.0):
    m = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    return scale * 0.5 * (m - m.conj().T)


def random_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
