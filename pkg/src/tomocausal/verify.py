"""Invariant suites over freshly generated states.

Each suite returns a list of :class:`CheckResult`; a check passes when it
has no violations.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np

from tomocausal.correlations import quantum_causal_report
from tomocausal.ensemble import run_ensemble
from tomocausal.linalg import hermitian_eigendecomposition
from tomocausal.optimizer import OptimizationSettings, grid_oracle, maximize_mutual_information
from tomocausal.states import generate_mixed_state, generate_x_state, make_rng, x_state_eigenvalues
from tomocausal.tomography import tomographic_report

SUITES = ("identities", "inequalities", "eigen", "oracle", "pure", "xstates")


@dataclass
class CheckResult:
    name: str
    total: int
    violations: int
    worst: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"[{status}] {self.name}: {self.violations}/{self.total} violations"
        if self.worst:
            msg += f", worst {self.worst:.3g}"
        if self.detail:
            msg += f" ({self.detail})"
        return msg


class _Counter:
    def __init__(self, name):
        self.name = name
        self.total = 0
        self.violations = 0
        self.worst = 0.0

    def check(self, excess: float):
        """Record one case; ``excess > 0`` is a violation of that size."""
        self.total += 1
        if excess > 0:
            self.violations += 1
            self.worst = max(self.worst, excess)

    def result(self, detail="") -> CheckResult:
        return CheckResult(self.name, self.total, self.violations, self.worst, detail)


def identities(count: int = 1000, seed: int = 0) -> list[CheckResult]:
    ratio = _Counter("d_tom*I = d_q*J_tom (1e-9)")
    sign = _Counter("sign(d_tom) = sign(d_q)")
    mag = _Counter("|d_tom| <= |d_q| (1e-9)")
    h_eq = _Counter("H(U0) = S per side (1e-9)")
    disc = _Counter("D_tom = H_AB(U0) - S_AB >= 0 (1e-9)")
    for k in range(count):
        s = generate_mixed_state(make_rng(seed + k))
        q = quantum_causal_report(s)
        t = tomographic_report(s, q)
        h_eq.check(max(abs(t.h_a0 - q.s_a), abs(t.h_b0 - q.s_b)) - 1e-9)
        disc.check(max(abs(t.d_discord_tom - (t.h_ab0 - q.s_ab)) - 1e-9, -1e-9 - t.d_discord_tom))
        if q.degenerate:
            continue
        ratio.check(abs(t.d_tom * q.i_ab_q - q.d_q * t.j_tom) - 1e-9)
        sign.check(1.0 if np.sign(t.d_tom) != np.sign(q.d_q) else 0.0)
        mag.check(abs(t.d_tom) - abs(q.d_q) - 1e-9)
    return [c.result() for c in (ratio, sign, mag, h_eq, disc)]


def inequalities(count: int = 1000, seed: int = 0, settings=None, workers: int = 1, records=None):
    if records is None:
        records, _, _ = run_ensemble("mixed", count, seed, settings, workers)
    jj = _Counter("J_opt >= J_tom (1e-9)")
    ij = _Counter("I_AB >= J_opt (1e-6)")
    hs = _Counter("H_opt >= S per side (1e-9)")
    dd = _Counter("D_tom >= D_opt (1e-6)")
    d0 = _Counter("D_opt >= 0 (1e-6)")
    for r in records:
        jj.check(r.j_tom - r.j_opt - 1e-9)
        ij.check(r.j_opt - r.i_q - 1e-6)
        hs.check(max(r.s_a - r.h_a_opt, r.s_b - r.h_b_opt) - 1e-9)
        dd.check(r.disc_opt - r.disc_tom - 1e-6)
        d0.check(-r.disc_opt - 1e-6)
    return [c.result() for c in (jj, ij, hs, dd, d0)]


def eigen(count: int = 10_000, seed: int = 0) -> list[CheckResult]:
    c = _Counter("X-state closed-form spectrum vs Jacobi (1e-10)")
    for k in range(count):
        p = generate_x_state(make_rng(seed + k))
        closed = np.sort(x_state_eigenvalues(p))[::-1]
        jac = hermitian_eigendecomposition(p.matrix()).eigenvalues
        c.check(float(np.max(np.abs(closed - jac))) - 1e-10)
    return [c.result()]


def oracle(count: int = 50, seed: int = 0, steps: int = 24, settings=None) -> list[CheckResult]:
    c = _Counter(f"J_opt >= grid({steps}) - 1e-3")
    settings = settings or OptimizationSettings()
    gaps = []
    for k in range(count):
        s = generate_mixed_state(make_rng(seed + k))
        opt = maximize_mutual_information(s, dataclasses.replace(settings, seed=seed + k))
        g = grid_oracle(s, steps)
        gaps.append(opt.j_opt - g)
        c.check(g - opt.j_opt - 1e-3)
    return [c.result(f"min J_opt - grid = {min(gaps):.3g}")]


def pure(count: int = 100, seed: int = 0, settings=None) -> list[CheckResult]:
    records, _, _ = run_ensemble("pure", count, seed, settings)
    quantum = _Counter("pure: i_q pair = -1, d_q = 0 (1e-9)")
    closed = _Counter("pure: J_tom = J_opt = h(alpha^2) (1e-6)")
    sym = _Counter("pure: tomographic/optimal i and d vanish (1e-6)")
    for r in records:
        quantum.check(max(abs(r.ind_ab_q + 1), abs(r.ind_ba_q + 1), abs(r.d_q)) - 1e-9)
        # h(alpha^2) is the entanglement entropy S_A of the Schmidt form
        closed.check(max(abs(r.j_tom - r.s_a), abs(r.j_opt - r.s_a)) - 1e-6)
        sym.check(max(abs(r.ind_ab_tom), abs(r.ind_ba_tom), abs(r.d_tom),
                      abs(r.ind_ab_opt), abs(r.ind_ba_opt), abs(r.d_opt)) - 1e-6)
    return [quantum.result(), closed.result(), sym.result()]


def xstates(count: int = 1000, seed: int = 0, settings=None, workers: int = 1, records=None):
    if records is None:
        records, _, _ = run_ensemble("x", count, seed, settings, workers)
    n1 = sum(r.x_type == "I" for r in records)
    n2 = sum(r.x_type == "II" for r in records)
    both = CheckResult("both X-state types present", 1, 0 if (n1 and n2) else 1,
                       detail=f"TypeI={n1}, TypeII={n2}")
    consistent = _Counter("TypeII: |H_opt - 1| and |d_opt| <= 1e-3")
    fit = _Counter("TypeII: Hadamard-phase fit residual <= 1e-3")
    for r in records:
        if r.x_type == "inconsistent":
            consistent.check(1.0)
        elif r.x_type == "II":
            consistent.check(max(abs(r.h_a_opt - 1), abs(r.h_b_opt - 1), abs(r.d_opt)) - 1e-3)
            fit.check(r.x_fit_residual - 1e-3)
    return [both, consistent.result(), fit.result()]


def run_suite(name: str, count: Optional[int] = None, seed: int = 1, settings=None,
              workers: int = 1) -> list[CheckResult]:
    """Run one suite (or ``"all"``) with a common state count."""
    if name == "all":
        out = []
        for sub in SUITES:
            out.extend(run_suite(sub, count, seed, settings, workers))
        return out
    n = count
    if name == "identities":
        return identities(n or 1000, seed)
    if name == "inequalities":
        return inequalities(n or 1000, seed, settings, workers)
    if name == "eigen":
        return eigen(n or 10_000, seed)
    if name == "oracle":
        return oracle(min(n, 50) if n else 50, seed, settings=settings)
    if name == "pure":
        return pure(n or 100, seed, settings)
    if name == "xstates":
        return xstates(n or 1000, seed, settings, workers)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")

