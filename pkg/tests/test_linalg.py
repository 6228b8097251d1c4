import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tomocausal.kernels import ConvergenceError
from tomocausal.linalg import (
    DimensionError,
    InvalidStateError,
    MeasurementBasis,
    basis_to_unitary,
    check_density_matrix,
    conjugate_by,
    hermitian_eigendecomposition,
    partial_trace,
    tensor_product,
)

from conftest import ket, random_hermitian, random_qubit_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)

angles = st.tuples(
    st.floats(0, math.pi, allow_nan=False),
    st.floats(0, 2 * math.pi, allow_nan=False, exclude_max=True),
)


class TestBasisToUnitary:
    def test_identity(self):
        assert np.allclose(basis_to_unitary(MeasurementBasis(0, 0)), np.eye(2), atol=1e-15)

    def test_real_hadamard_like(self):
        u = basis_to_unitary(MeasurementBasis(math.pi / 2, 0))
        assert np.allclose(np.abs(u), 1 / math.sqrt(2))
        assert np.allclose(u.imag, 0)

    def test_quarter_phase(self):
        u = basis_to_unitary(MeasurementBasis(math.pi / 2, math.pi / 2))
        r = 1 / math.sqrt(2)
        expected = np.array([[r, -1j * r], [-1j * r, r]])
        assert np.allclose(u, expected, atol=1e-15)

    @settings(max_examples=1000, deadline=None)
    @given(angles)
    def test_unitary(self, tp):
        u = basis_to_unitary(MeasurementBasis(*tp))
        assert np.max(np.abs(u @ u.conj().T - np.eye(2))) <= 1e-12

    @pytest.mark.parametrize("theta,phi", [(-0.1, 0.0), (3.2, 0.0), (0.1, 2 * math.pi), (math.nan, 0)])
    def test_rejects_out_of_range(self, theta, phi):
        with pytest.raises(ValueError):
            MeasurementBasis(theta, phi)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-20, 20), st.floats(-20, 20))
    def test_from_angles_keeps_axis(self, theta, phi):
        b = MeasurementBasis.from_angles(theta, phi)
        raw = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
        assert np.allclose(b.axis, raw, atol=1e-9)


class TestTensorProduct:
    def test_identity(self):
        assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))

    def test_projectors(self):
        assert np.array_equal(tensor_product(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))

    def test_flip_maps_00_to_11(self):
        xx = tensor_product(SX, SX)
        assert np.array_equal(xx @ np.eye(4)[0], np.eye(4)[3])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            tensor_product(np.eye(4), np.eye(2))


class TestPartialTrace:
    def test_bell(self):
        psi = ket(1, 0, 0, 1)
        assert np.allclose(partial_trace(np.outer(psi, psi.conj()), "A"), np.eye(2) / 2)

    def test_product_keeps_b(self):
        rho_b = np.array([[0.3, 0.1j], [-0.1j, 0.7]])
        rho = np.kron(np.diag([1, 0]), rho_b)
        assert np.allclose(partial_trace(rho, "B"), rho_b, atol=1e-15)

    def test_x_state_diagonal(self):
        d = [0.1, 0.2, 0.3, 0.4]
        rho = np.diag(d).astype(complex)
        rho[0, 3], rho[3, 0] = 0.1j, -0.1j
        rho[1, 2], rho[2, 1] = 0.05, 0.05
        assert np.allclose(partial_trace(rho, "A"), np.diag([d[0] + d[1], d[2] + d[3]]), atol=1e-15)
        assert np.allclose(partial_trace(rho, "B"), np.diag([d[0] + d[2], d[1] + d[3]]), atol=1e-15)

    def test_random_products(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            ra, rb = random_qubit_state(rng), random_qubit_state(rng)
            rho = np.kron(ra, rb)
            assert np.max(np.abs(partial_trace(rho, "A") - ra)) <= 1e-12
            assert np.max(np.abs(partial_trace(rho, "B") - rb)) <= 1e-12

    def test_invalid_input(self):
        with pytest.raises(InvalidStateError):
            partial_trace(np.diag([1.0, 1.0, 0.0, 0.0]), "A")
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, "C")


class TestEigendecomposition:
    def test_diagonal(self):
        e = hermitian_eigendecomposition(np.diag([0.7, 0.3]))
        assert np.allclose(e.eigenvalues, [0.7, 0.3])
        assert np.allclose(e.eigenvectors, np.eye(2))

    def test_rank_one_projector(self):
        e = hermitian_eigendecomposition(np.full((2, 2), 0.5))
        assert np.allclose(e.eigenvalues, [1.0, 0.0], atol=1e-15)

    def test_ties_keep_order(self):
        e = hermitian_eigendecomposition(np.diag([0.25, 0.5, 0.25, 0.0]))
        assert list(e.eigenvalues) == [0.5, 0.25, 0.25, 0.0]
        # the two 0.25 eigenvectors stay in their original order
        assert np.allclose(np.abs(e.eigenvectors[:, 1]), np.eye(4)[0])
        assert np.allclose(np.abs(e.eigenvectors[:, 2]), np.eye(4)[2])

    def test_random_hermitian_reconstruction(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            m = random_hermitian(rng)
            e = hermitian_eigendecomposition(m)
            v, w = e.eigenvectors, e.eigenvalues
            assert np.all(np.diff(w) <= 0)
            assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - m)) <= 1e-10
            assert np.max(np.abs(v.conj().T @ v - np.eye(4))) <= 1e-10
            # independent check against LAPACK
            assert np.allclose(w, np.linalg.eigvalsh(m)[::-1], atol=1e-10)

    def test_non_hermitian(self):
        with pytest.raises(ValueError):
            hermitian_eigendecomposition(np.array([[0, 1], [0, 0]]))

    def test_sweep_limit(self, backend):
        m = random_hermitian(np.random.default_rng(1))
        with pytest.raises(ConvergenceError):
            backend.jacobi_eigh(m, 1e-14, 0)


class TestDensityMatrix:
    @pytest.mark.parametrize("m", [
        np.diag([0.6, 0.6]),
        np.array([[0.5, 0.6], [0.6, 0.5]]),
        np.array([[0.5, 0.1], [0.2, 0.5]]),
        np.eye(3) / 3,
    ])
    def test_rejects(self, m):
        with pytest.raises(InvalidStateError):
            check_density_matrix(m)

    def test_accepts_round_off(self):
        check_density_matrix(np.diag([1.0 + 5e-11, -5e-11]))


class TestConjugateBy:
    def test_identity(self):
        rho = random_qubit_state(np.random.default_rng(3))
        assert np.allclose(conjugate_by(rho, np.eye(2)), rho)

    def test_rotated_projector(self):
        u = basis_to_unitary(MeasurementBasis(math.pi / 2, 0))
        out = conjugate_by(np.diag([1, 0]), u)
        assert np.allclose(np.diag(out), [0.5, 0.5])

    def test_bell_by_identity(self):
        psi = ket(1, 0, 0, 1)
        rho = np.outer(psi, psi.conj())
        assert np.array_equal(conjugate_by(rho, np.eye(4)), rho)

    def test_preserves_spectrum(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            rho = np.kron(random_qubit_state(rng), random_qubit_state(rng))
            u = np.kron(basis_to_unitary(MeasurementBasis(rng.uniform(0, math.pi), rng.uniform(0, 6))),
                        basis_to_unitary(MeasurementBasis(rng.uniform(0, math.pi), rng.uniform(0, 6))))
            out = conjugate_by(rho, u)
            assert abs(np.trace(out) - 1) <= 1e-12
            assert np.allclose(hermitian_eigendecomposition(out).eigenvalues,
                               hermitian_eigendecomposition(rho).eigenvalues, atol=1e-10)

    def test_errors(self):
        with pytest.raises(ValueError):
            conjugate_by(np.eye(2) / 2, np.array([[1, 1], [0, 1]]))
        with pytest.raises(DimensionError):
            conjugate_by(np.eye(4) / 4, np.eye(2))
