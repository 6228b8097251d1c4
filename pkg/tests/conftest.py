import math

import numpy as np
import pytest

from tomocausal import _pykernels
from tomocausal.correlations import BipartiteState

try:
    from tomocausal import _kernels as _cykernels
except ImportError:  # extension not built
    _cykernels = None

BACKENDS = [pytest.param(_pykernels, id="python")]
if _cykernels is not None:
    BACKENDS.append(pytest.param(_cykernels, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def ket(*amps):
    psi = np.array(amps, dtype=complex)
    return psi / np.linalg.norm(psi)


@pytest.fixture
def bell():
    return BipartiteState.from_ket(ket(1, 0, 0, 1))


@pytest.fixture
def classical():
    return BipartiteState.from_matrix(np.diag([0.5, 0, 0, 0.5]))


@pytest.fixture
def product():
    rho_a = np.array([[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]])
    rho_b = np.array([[0.4, 0.05j], [-0.05j, 0.6]])
    return BipartiteState.from_matrix(np.kron(rho_a, rho_b))


def random_hermitian(rng, n=4, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (a + a.conj().T) / 2


def random_unitary(rng, n=2):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_qubit_state(rng):
    v = rng.standard_normal(3)
    v *= rng.uniform(0, 1) / np.linalg.norm(v)
    paulis = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    return 0.5 * (np.eye(2) + sum(c * p for c, p in zip(v, paulis)))


H_BIT = lambda p: 0.0 if p in (0.0, 1.0) else -p * math.log2(p) - (1 - p) * math.log2(1 - p)
