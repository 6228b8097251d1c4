"""Maximisation of the classical mutual information over local bases.

The search runs Nelder-Mead on the four Bloch angles
``(theta_A, phi_A, theta_B, phi_B)`` from the tomographic bases plus a set
of seeded uniform random starts and keeps the best value found.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tomocausal import kernels
from tomocausal.correlations import BipartiteState, independence_pair, quantum_causal_report
from tomocausal.linalg import MeasurementBasis, basis_to_unitary
from tomocausal.tomography import bloch_coefficients, tomographic_report

EPS = 1e-9


@dataclass(frozen=True)
class OptimizationSettings:
    random_starts: int = 24
    include_tomographic_start: bool = True
    simplex_tolerance: float = 1e-10
    max_iterations: int = 2000
    initial_step: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.random_starts < 1:
            raise ValueError("random_starts must be >= 1")
        if self.simplex_tolerance <= 0 or self.initial_step <= 0:
            raise ValueError("tolerances and step sizes must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass(frozen=True)
class OptimalReport:
    basis_a_opt: MeasurementBasis
    basis_b_opt: MeasurementBasis
    j_opt: float
    h_a_opt: float
    h_b_opt: float
    d_discord_opt: float
    ind_a_given_b_opt: Optional[float]
    ind_b_given_a_opt: Optional[float]
    d_opt: Optional[float]
    degenerate: bool
    converged: bool = True
    best_start: int = 0
    evaluations: int = 0


def optimal_causal_quantities(j_opt: float, h_a_opt: float, h_b_opt: float):
    """Independence functions and asymmetry in the optimal bases.

    Returns ``((i_{A|B}, i_{B|A}), d_opt, degenerate)``; the pair and ``d_opt``
    are ``None`` when either entropy is below 1e-9.

    >>> optimal_causal_quantities(0.5, 1.0, 0.8)
    ((0.5, 0.375), 0.125, False)
    """
    if h_a_opt < 0 or h_b_opt < 0:
        raise ValueError("entropies must be non-negative")
    pair = independence_pair(j_opt, h_a_opt, h_b_opt, EPS)
    if pair is None:
        return None, None, True
    return (pair[0], pair[1]), pair[2], False


def _start_points(state: BipartiteState, cfg: OptimizationSettings, tom=None) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed)
    starts = []
    if cfg.include_tomographic_start:
        tom = tom if tom is not None else tomographic_report(state)
        starts.append([tom.basis_a0.theta, tom.basis_a0.phi, tom.basis_b0.theta, tom.basis_b0.phi])
    theta = rng.uniform(0.0, math.pi, size=(cfg.random_starts, 2))
    phi = rng.uniform(0.0, 2 * math.pi, size=(cfg.random_starts, 2))
    for k in range(cfg.random_starts):
        starts.append([theta[k, 0], phi[k, 0], theta[k, 1], phi[k, 1]])
    return np.array(starts)


def maximize_mutual_information(
    state: BipartiteState,
    cfg: Optional[OptimizationSettings] = None,
    quantum=None,
    tomographic=None,
) -> OptimalReport:
    cfg = cfg or OptimizationSettings()
    q = quantum if quantum is not None else quantum_causal_report(state)
    coef = bloch_coefficients(state.rho_ab)

    best_x, best_j, best_k = None, -math.inf, -1
    all_converged = True
    nfev = 0
    for k, x0 in enumerate(_start_points(state, cfg, tomographic)):
        x, j, _, fe, ok = kernels.nelder_mead_max(
            coef, x0, cfg.initial_step, cfg.simplex_tolerance, cfg.max_iterations, 3
        )
        nfev += fe
        all_converged = all_converged and ok
        # strict comparison: ties keep the lowest start index
        if j > best_j:
            best_x, best_j, best_k = x, j, k

    ba = MeasurementBasis.from_angles(best_x[0], best_x[1])
    bb = MeasurementBasis.from_angles(best_x[2], best_x[3])
    j, h_a, h_b = kernels.mutual_information(coef, ba.theta, ba.phi, bb.theta, bb.phi)
    j = max(j, 0.0)
    pair, d_opt, degenerate = optimal_causal_quantities(j, h_a, h_b)
    ind_a, ind_b = pair if pair is not None else (None, None)
    return OptimalReport(
        ba, bb, j, h_a, h_b, q.i_ab_q - j, ind_a, ind_b, d_opt, degenerate,
        converged=all_converged, best_start=best_k, evaluations=nfev,
    )


def _grid_rows(steps: int) -> np.ndarray:
    """Outcome rows of every grid basis unitary, shape (steps*steps, 2, 2)."""
    thetas = np.linspace(0.0, math.pi, steps)
    phis = np.linspace(0.0, 2 * math.pi, steps, endpoint=False)
    return np.array([basis_to_unitary(MeasurementBasis(t, p)) for t in thetas for p in phis])


def _plogp(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = -p[mask] * np.log2(p[mask])
    return out


def grid_oracle(state: BipartiteState, steps: int = 24) -> float:
    """Brute-force maximum of the mutual information over a product angle grid.

    Tomograms are built directly from ``U rho U^dagger`` for every pair of
    grid bases, independently of the optimiser's Bloch-vector kernel.
    """
    if steps < 8:
        raise ValueError("steps must be >= 8")
    us = _grid_rows(steps)
    r = np.asarray(state.rho_ab).reshape(2, 2, 2, 2)
    # partial contraction over qubit A: X[g, m, l, l'] = sum_kk' U[g,m,k] rho[k,l,k',l'] U*[g,m,k']
    x = np.einsum("gmk,klpq,gmp->gmlq", us, r, us.conj(), optimize=True)
    joint = np.einsum("hnl,gmlq,hnq->ghmn", us, x, us.conj(), optimize=True).real
    joint = np.clip(joint, 0.0, None)
    ma = joint.sum(axis=3)
    mb = joint.sum(axis=2)
    j = _plogp(ma).sum(axis=2) + _plogp(mb).sum(axis=2) - _plogp(joint).sum(axis=(2, 3))
    return float(max(j.max(), 0.0))
