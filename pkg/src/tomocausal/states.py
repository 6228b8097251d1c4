"""State constructors, random generators and the X-state classifier."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tomocausal.correlations import BipartiteState
from tomocausal.linalg import MeasurementBasis, basis_to_unitary

X_PARAM_TOL = 1e-12
TYPE_I_TOL = 1e-6
TYPE_II_TOL = 1e-3

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class ClassificationError(RuntimeError):
    """An apparent TypeII X-state whose optimum is not the symmetric one.

    This points at an optimiser failure rather than at the state.
    """


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator (PCG64). Ensembles seed state ``k`` with ``master + k``."""
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class XStateParams:
    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho14: complex = 0j
    rho23: complex = 0j

    def __post_init__(self):
        diag = (self.rho11, self.rho22, self.rho33, self.rho44)
        if min(diag) < 0:
            raise ValueError("X-state diagonal must be non-negative")
        if abs(sum(diag) - 1.0) > X_PARAM_TOL:
            raise ValueError(f"X-state diagonal sums to {sum(diag)!r}")
        if abs(self.rho14) ** 2 > self.rho11 * self.rho44 + X_PARAM_TOL:
            raise ValueError("|rho14|^2 exceeds rho11*rho44")
        if abs(self.rho23) ** 2 > self.rho22 * self.rho33 + X_PARAM_TOL:
            raise ValueError("|rho23|^2 exceeds rho22*rho33")

    def matrix(self) -> np.ndarray:
        m = np.diag([self.rho11, self.rho22, self.rho33, self.rho44]).astype(complex)
        m[0, 3] = self.rho14
        m[3, 0] = np.conj(self.rho14)
        m[1, 2] = self.rho23
        m[2, 1] = np.conj(self.rho23)
        return m

    def state(self) -> BipartiteState:
        return BipartiteState.from_matrix(self.matrix())

    @classmethod
    def werner(cls, p: float) -> "XStateParams":
        """Mixture ``p |Phi+><Phi+| + (1-p) 1/4``."""
        if not -1 / 3 <= p <= 1:
            raise ValueError("Werner parameter must lie in [-1/3, 1]")
        return cls((1 + p) / 4, (1 - p) / 4, (1 - p) / 4, (1 + p) / 4, p / 2, 0j)


@dataclass(frozen=True)
class PureSchmidtParams:
    alpha: float
    local_basis_a: MeasurementBasis = MeasurementBasis()
    local_basis_b: MeasurementBasis = MeasurementBasis()

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"Schmidt coefficient must lie in (0, 1), got {self.alpha}")


def make_pure_schmidt(p: PureSchmidtParams) -> BipartiteState:
    """``alpha |u0 v0> + sqrt(1 - alpha^2) |u1 v1>``.

    The Schmidt vectors are the eigenvectors of the given measurement bases,
    i.e. the conjugated rows of their unitaries.
    """
    ua = basis_to_unitary(p.local_basis_a).conj()
    ub = basis_to_unitary(p.local_basis_b).conj()
    psi = p.alpha * np.kron(ua[0], ub[0]) + math.sqrt(1 - p.alpha**2) * np.kron(ua[1], ub[1])
    return BipartiteState.from_matrix(np.outer(psi, psi.conj()))


def generate_x_state(rng: np.random.Generator) -> XStateParams:
    """Random X-state: normalised uniform diagonal, uniform coherence scales and phases.

    Draw order: four diagonal weights, then (alpha_1, alpha_2), then (phi_1, phi_2).
    """
    p = rng.uniform(0.0, 1.0, size=4)
    d = p / p.sum()
    alpha = rng.uniform(0.0, 1.0, size=2)
    phase = rng.uniform(0.0, 2 * math.pi, size=2)
    r14 = alpha[0] * math.sqrt(d[0] * d[3]) * cmath.exp(1j * phase[0])
    r23 = alpha[1] * math.sqrt(d[1] * d[2]) * cmath.exp(1j * phase[1])
    return XStateParams(float(d[0]), float(d[1]), float(d[2]), float(d[3]), complex(r14), complex(r23))


def generate_mixed_state(rng: np.random.Generator) -> BipartiteState:
    """Random mixture of four random pure states with uniform weights."""
    p = rng.uniform(0.0, 1.0, size=4)
    psi = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        v = psi[k]
        rho += p[k] * np.outer(v, v.conj()) / np.vdot(v, v).real
    return BipartiteState.from_matrix(rho / p.sum())


def x_state_eigenvalues(p: XStateParams) -> np.ndarray:
    """Closed-form spectrum of an X-state, ordered (l1, l2, l3, l4)."""
    r14 = math.sqrt((p.rho11 - p.rho44) ** 2 + 4 * abs(p.rho14) ** 2)
    r23 = math.sqrt((p.rho22 - p.rho33) ** 2 + 4 * abs(p.rho23) ** 2)
    return np.array([
        0.5 * (p.rho11 + p.rho44 + r14),
        0.5 * (p.rho11 + p.rho44 - r14),
        0.5 * (p.rho22 + p.rho33 + r23),
        0.5 * (p.rho22 + p.rho33 - r23),
    ])


@dataclass(frozen=True)
class XStateClass:
    kind: str
    j_gap: float
    phi_a: Optional[float] = None
    phi_b: Optional[float] = None
    fit_residual: Optional[float] = None


def hadamard_phase_unitary(phi: float) -> np.ndarray:
    """``H @ [[0, e^{-i phi}], [e^{i phi}, 0]]``: measures the equatorial axis at azimuth 2 phi."""
    flip = np.array([[0, cmath.exp(-1j * phi)], [cmath.exp(1j * phi), 0]])
    return _HADAMARD @ flip


def phase_fit_residual(u: np.ndarray, phi: float) -> float:
    """Frobenius distance from ``u`` to the Hadamard-phase form, minimised over row phases."""
    target = hadamard_phase_unitary(phi)
    total = 0.0
    for row in range(2):
        overlap = abs(np.vdot(target[row], u[row]))
        total += max(0.0, 2.0 - 2.0 * overlap)
    return math.sqrt(total)


def fit_hadamard_phase(b: MeasurementBasis) -> tuple[float, float]:
    """Phase ``phi`` in [0, pi) and residual of the best Hadamard-phase fit of ``b``.

    Up to row phases the overlap of each row is ``|cos(t/2) + sin(t/2) e^{i(2 phi - p)}|/sqrt2``
    for a basis at angles ``(t, p)``, which peaks at ``phi = p / 2``.
    """
    phi = (b.phi / 2.0) % math.pi
    return phi, phase_fit_residual(basis_to_unitary(b), phi)


def classify_x_state(p: XStateParams, opt, tom) -> XStateClass:
    gap = opt.j_opt - tom.j_tom
    if gap <= TYPE_I_TOL:
        return XStateClass("I", gap)
    d_opt = opt.d_opt if opt.d_opt is not None else math.inf
    if (
        abs(opt.h_a_opt - 1.0) > TYPE_II_TOL
        or abs(opt.h_b_opt - 1.0) > TYPE_II_TOL
        or abs(d_opt) > TYPE_II_TOL
    ):
        raise ClassificationError(
            f"J gap {gap:.3g} but H_opt=({opt.h_a_opt:.6f}, {opt.h_b_opt:.6f}), d_opt={d_opt:.3g}"
        )
    phi_a, res_a = fit_hadamard_phase(opt.basis_a_opt)
    phi_b, res_b = fit_hadamard_phase(opt.basis_b_opt)
    return XStateClass("II", gap, phi_a, phi_b, max(res_a, res_b))
