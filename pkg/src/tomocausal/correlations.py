"""Quantum causal analysis of a two-qubit state.

Entropies are in bits. The independence function ``i_{A|B} = 1 - I/S_A``
runs from -1 (maximal quantum correlation) through 0 (A is a function of B)
to 1 (independence); ``d = i_{A|B} - i_{B|A}`` measures the asymmetry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from tomocausal.linalg import (
    check_density_matrix,
    clamp_spectrum,
    hermitian_eigendecomposition,
    partial_trace,
)

EPS = 1e-9


def entropy_bits(probs) -> float:
    """Shannon entropy of a list of non-negative weights, 0 log 0 = 0."""
    h = 0.0
    for p in probs:
        if p > 0.0:
            h -= p * math.log2(p)
    return float(h)


@dataclass(frozen=True)
class BipartiteState:
    """A validated two-qubit density matrix with its reduced states."""

    rho_ab: np.ndarray
    rho_a: np.ndarray = field(repr=False)
    rho_b: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, rho) -> "BipartiteState":
        rho = check_density_matrix(rho)
        if rho.shape != (4, 4):
            raise ValueError("a two-qubit state needs a 4x4 density matrix")
        rho = 0.5 * (rho + rho.conj().T)
        rho.setflags(write=False)
        ra = partial_trace(rho, "A")
        rb = partial_trace(rho, "B")
        ra.setflags(write=False)
        rb.setflags(write=False)
        return cls(rho, ra, rb)

    @classmethod
    def from_ket(cls, psi) -> "BipartiteState":
        psi = np.asarray(psi, dtype=complex).reshape(4)
        psi = psi / np.linalg.norm(psi)
        return cls.from_matrix(np.outer(psi, psi.conj()))


def von_neumann_entropy(rho) -> float:
    rho = check_density_matrix(rho)
    lam = clamp_spectrum(hermitian_eigendecomposition(rho).eigenvalues)
    return entropy_bits(lam)


def independence_pair(mutual: float, h_a: float, h_b: float, eps: float = EPS):
    """Return ``(i_{A|B}, i_{B|A}, d)`` or ``None`` when an entropy is below eps."""
    if min(h_a, h_b) < eps:
        return None
    i_ab = 1.0 - mutual / h_a
    i_ba = 1.0 - mutual / h_b
    return i_ab, i_ba, i_ab - i_ba


@dataclass(frozen=True)
class QuantumCausalReport:
    s_a: float
    s_b: float
    s_ab: float
    i_ab_q: float
    ind_a_given_b: Optional[float]
    ind_b_given_a: Optional[float]
    d_q: Optional[float]
    degenerate: bool


def quantum_causal_report(s: BipartiteState) -> QuantumCausalReport:
    s_a = von_neumann_entropy(s.rho_a)
    s_b = von_neumann_entropy(s.rho_b)
    s_ab = von_neumann_entropy(s.rho_ab)
    mutual = s_a + s_b - s_ab
    pair = independence_pair(mutual, s_a, s_b)
    if pair is None:
        return QuantumCausalReport(s_a, s_b, s_ab, mutual, None, None, None, True)
    return QuantumCausalReport(s_a, s_b, s_ab, mutual, *pair, False)
