"""Spin tomograms of two-qubit states and the tomographic causal report.

The "tomographic" bases rotate each reduced state to diagonal form, so the
marginal Shannon entropies equal the von Neumann entropies and the gap
``I_AB - J`` is the tomographic discord.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tomocausal.correlations import (
    BipartiteState,
    entropy_bits,
    independence_pair,
    quantum_causal_report,
)
from tomocausal.linalg import (
    MeasurementBasis,
    basis_to_unitary,
    conjugate_by,
    hermitian_eigendecomposition,
    tensor_product,
)

PROB_TOL = 1e-10
NEG_CLAMP = 1e-12

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class InvalidDistributionError(ValueError):
    pass


def _clean(p) -> np.ndarray:
    p = np.asarray(p, dtype=float).copy()
    if np.any(p < -NEG_CLAMP):
        raise InvalidDistributionError(f"negative probability {p.min():.3g}")
    p[p < 0] = 0.0
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise InvalidDistributionError(f"probabilities sum to {p.sum():.12g}")
    return p


@dataclass(frozen=True)
class Tomogram:
    """Joint outcome table ``joint[m_A, m_B]`` and its two marginals."""

    joint: np.ndarray
    marginal_a: np.ndarray
    marginal_b: np.ndarray

    @classmethod
    def from_joint(cls, joint) -> "Tomogram":
        joint = _clean(np.asarray(joint, dtype=float).reshape(4)).reshape(2, 2)
        return cls(joint, joint.sum(axis=1), joint.sum(axis=0))


def tomogram(s: BipartiteState, ba: MeasurementBasis, bb: MeasurementBasis) -> Tomogram:
    u = tensor_product(basis_to_unitary(ba), basis_to_unitary(bb))
    rotated = conjugate_by(s.rho_ab, u)
    return Tomogram.from_joint(np.real(np.diag(rotated)))


def shannon_entropy(p) -> float:
    return entropy_bits(_clean(np.ravel(p)))


def classical_mutual_information(t: Tomogram) -> float:
    j = shannon_entropy(t.marginal_a) + shannon_entropy(t.marginal_b) - shannon_entropy(t.joint)
    if -PROB_TOL <= j < 0.0:
        j = 0.0
    return j


def _vector_to_basis(v) -> MeasurementBasis:
    a0, a1 = complex(v[0]), complex(v[1])
    theta = 2.0 * math.atan2(abs(a1), abs(a0))
    if abs(a1) == 0.0 or abs(a0) == 0.0:
        phi = 0.0
    else:
        phi = math.atan2(a1.imag, a1.real) - math.atan2(a0.imag, a0.real)
    return MeasurementBasis.from_angles(theta, phi)


def diagonalizing_basis(rho) -> MeasurementBasis:
    """Basis whose unitary rotates a qubit state to descending diagonal form.

    The maximally mixed state (within 1e-12) maps to the computational basis.
    """
    rho = np.asarray(rho, dtype=complex)
    if np.max(np.abs(rho - 0.5 * np.eye(2))) <= 1e-12:
        return MeasurementBasis(0.0, 0.0)
    eig = hermitian_eigendecomposition(rho)
    # outcome 0 projects on the leading eigenvector
    return _vector_to_basis(eig.eigenvectors[:, 0])


def bloch_coefficients(rho) -> np.ndarray:
    """Pack ``<s_i x 1>``, ``<1 x s_j>`` and ``<s_i x s_j>`` into 15 reals.

    This is the input layout of the mutual-information kernels.
    """
    rho = np.asarray(rho, dtype=complex)
    eye = np.eye(2)
    a = [np.trace(rho @ np.kron(p, eye)).real for p in _PAULI]
    b = [np.trace(rho @ np.kron(eye, p)).real for p in _PAULI]
    c = [np.trace(rho @ np.kron(p, q)).real for p in _PAULI for q in _PAULI]
    return np.array(a + b + c)


@dataclass(frozen=True)
class TomographicReport:
    basis_a0: MeasurementBasis
    basis_b0: MeasurementBasis
    h_a0: float
    h_b0: float
    h_ab0: float
    j_tom: float
    d_discord_tom: float
    ind_a_given_b_tom: Optional[float]
    ind_b_given_a_tom: Optional[float]
    d_tom: Optional[float]
    degenerate: bool


def tomographic_report(s: BipartiteState, quantum=None) -> TomographicReport:
    """Causal analysis of the tomogram taken in the diagonalising bases.

    ``quantum`` may carry an already computed :class:`QuantumCausalReport`.
    """
    q = quantum if quantum is not None else quantum_causal_report(s)
    ba = diagonalizing_basis(s.rho_a)
    bb = diagonalizing_basis(s.rho_b)
    t = tomogram(s, ba, bb)
    h_a = shannon_entropy(t.marginal_a)
    h_b = shannon_entropy(t.marginal_b)
    h_ab = shannon_entropy(t.joint)
    j = classical_mutual_information(t)
    # independence functions use the von Neumann entropies, which the
    # diagonal marginals reproduce; keeps d_tom / d_q = J_tom / I exact
    pair = independence_pair(j, q.s_a, q.s_b)
    if pair is None:
        return TomographicReport(ba, bb, h_a, h_b, h_ab, j, q.i_ab_q - j, None, None, None, True)
    return TomographicReport(ba, bb, h_a, h_b, h_ab, j, q.i_ab_q - j, *pair, False)
