"""Small dense complex linear algebra for one- and two-qubit operators.

Matrices are plain ``numpy`` arrays. Two-qubit matrices use the basis order
``|00>, |01>, |10>, |11>`` with qubit A as the first tensor factor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tomocausal import kernels

DM_TOL = 1e-10
HERMITIAN_TOL = 1e-8
UNITARY_TOL = 1e-10


class InvalidStateError(ValueError):
    """A matrix failed density-matrix validation."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective qubit measurement along the Bloch axis (theta, phi).

    Outcome 0 projects onto the +axis state. Only the axis matters for a
    tomogram, so the row phases of the underlying unitary are fixed.
    """

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("basis angles must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi={self.phi} outside [0, 2pi)")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "MeasurementBasis":
        """Build a basis from unconstrained angles, folding them into range."""
        theta = math.fmod(theta, 2 * math.pi)
        if theta < 0:
            theta += 2 * math.pi
        if theta > math.pi:
            theta = 2 * math.pi - theta
            phi = phi + math.pi
        phi = math.fmod(phi, 2 * math.pi)
        if phi < 0:
            phi += 2 * math.pi
        if phi >= 2 * math.pi:
            phi = 0.0
        return cls(theta, phi)

    @property
    def axis(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


@dataclass(frozen=True)
class HermitianEigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0


def basis_to_unitary(b: MeasurementBasis) -> np.ndarray:
    c = math.cos(b.theta / 2)
    s = math.sin(b.theta / 2)
    e = complex(math.cos(b.phi), math.sin(b.phi))
    return np.array([[c, e.conjugate() * s], [-e * s, c]], dtype=complex)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DimensionError(f"expected two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian")
    return m


def hermitian_eigendecomposition(m: np.ndarray) -> HermitianEigenSystem:
    """Eigen-decompose a Hermitian matrix with cyclic Jacobi rotations.

    Eigenvalues come back in descending order (stable for ties) and the
    eigenvector matrix is permuted to match.

    Raises
    ------
    ValueError
        If ``m`` is not Hermitian within 1e-8.
    ConvergenceError
        If the rotations have not converged after 100 sweeps.
    """
    m = check_hermitian(m)
    # symmetrise away the tolerated skew part
    m = 0.5 * (m + m.conj().T)
    w, v, sweeps = kernels.jacobi_eigh(m, 1e-14, 100)
    order = sorted(range(len(w)), key=lambda k: -w[k])
    return HermitianEigenSystem(np.asarray(w)[order], np.asarray(v)[:, order], sweeps)


def check_density_matrix(m: np.ndarray, tol: float = DM_TOL) -> np.ndarray:
    """Validate ``m`` as a density matrix and return it as a complex array."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
        raise InvalidStateError(f"expected a 2x2 or 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("matrix has non-finite entries")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1) > tol:
        raise InvalidStateError(f"trace {tr.real:.3g} differs from 1")
    lam = hermitian_eigendecomposition(m).eigenvalues
    if lam[-1] < -tol:
        raise InvalidStateError(f"negative eigenvalue {lam[-1]:.3g}")
    return m


def clamp_spectrum(lam, tol: float = DM_TOL) -> np.ndarray:
    lam = np.array(lam, dtype=float)
    lam[(lam < 0) & (lam >= -tol)] = 0.0
    return lam


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduced state of qubit ``keep`` ("A" or "B") of a two-qubit state."""
    rho = check_density_matrix(rho)
    if rho.shape != (4, 4):
        raise DimensionError("partial_trace needs a 4x4 density matrix")
    r = rho.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {u.shape}")
    if np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) > tol:
        raise ValueError("matrix is not unitary")
    return u


def conjugate_by(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    u = check_unitary(u)
    if rho.shape != u.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {u.shape}")
    return u @ rho @ u.conj().T
