"""Per-state analysis, random ensembles, summary statistics and file output."""
from __future__ import annotations

import csv
import dataclasses
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from tomocausal.correlations import BipartiteState, quantum_causal_report
from tomocausal.linalg import MeasurementBasis
from tomocausal.optimizer import OptimizationSettings, maximize_mutual_information
from tomocausal.states import (
    ClassificationError,
    PureSchmidtParams,
    XStateParams,
    classify_x_state,
    generate_mixed_state,
    generate_x_state,
    make_pure_schmidt,
    make_rng,
)
from tomocausal.tomography import tomographic_report

STATE_CLASSES = ("x", "mixed", "pure")

CSV_FIELDS = [
    "index", "seed", "class",
    "s_a", "s_b", "s_ab", "i_q", "ind_ab_q", "ind_ba_q", "d_q",
    "h_a0", "h_b0", "h_ab0", "j_tom", "disc_tom", "ind_ab_tom", "ind_ba_tom", "d_tom",
    "theta_a_opt", "phi_a_opt", "theta_b_opt", "phi_b_opt",
    "j_opt", "h_a_opt", "h_b_opt", "disc_opt", "ind_ab_opt", "ind_ba_opt", "d_opt",
    "x_type", "degenerate",
]


@dataclass
class EnsembleRecord:
    index: int
    seed: int
    state_class: str
    s_a: float
    s_b: float
    s_ab: float
    i_q: float
    ind_ab_q: Optional[float]
    ind_ba_q: Optional[float]
    d_q: Optional[float]
    h_a0: float
    h_b0: float
    h_ab0: float
    j_tom: float
    disc_tom: float
    ind_ab_tom: Optional[float]
    ind_ba_tom: Optional[float]
    d_tom: Optional[float]
    theta_a_opt: float
    phi_a_opt: float
    theta_b_opt: float
    phi_b_opt: float
    j_opt: float
    h_a_opt: float
    h_b_opt: float
    disc_opt: float
    ind_ab_opt: Optional[float]
    ind_ba_opt: Optional[float]
    d_opt: Optional[float]
    x_type: str = ""
    degenerate: bool = False
    # not part of the CSV schema
    x_phi_a: Optional[float] = None
    x_phi_b: Optional[float] = None
    x_fit_residual: Optional[float] = None
    converged: bool = True
    matrix: Optional[np.ndarray] = field(default=None, repr=False)

    def row(self) -> list[str]:
        return [_fmt(v) for v in self._raw_values()]

    def to_json(self) -> dict:
        out = {name: _json_value(v) for name, v in zip(CSV_FIELDS, self._raw_values())}
        out["x_phi_a"] = self.x_phi_a
        out["x_phi_b"] = self.x_phi_b
        out["x_fit_residual"] = self.x_fit_residual
        out["converged"] = self.converged
        if self.matrix is not None:
            out["matrix"] = [[float(z.real), float(z.imag)] for z in np.ravel(self.matrix)]
        return out

    def _raw_values(self):
        values = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        values["class"] = values.pop("state_class")
        return [values[name] for name in CSV_FIELDS]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def analyze_state(
    state: BipartiteState,
    settings: Optional[OptimizationSettings] = None,
    x_params: Optional[XStateParams] = None,
    index: int = 0,
    seed: int = 0,
    state_class: str = "",
) -> EnsembleRecord:
    """Run all three analyses on one state and flatten them into a record."""
    settings = settings or OptimizationSettings(seed=seed)
    q = quantum_causal_report(state)
    tom = tomographic_report(state, q)
    opt = maximize_mutual_information(state, settings, q, tom)

    x_type, phi_a, phi_b, residual = "", None, None, None
    if x_params is not None:
        try:
            cls = classify_x_state(x_params, opt, tom)
            x_type, phi_a, phi_b, residual = cls.kind, cls.phi_a, cls.phi_b, cls.fit_residual
        except ClassificationError:
            x_type = "inconsistent"

    return EnsembleRecord(
        index, seed, state_class,
        q.s_a, q.s_b, q.s_ab, q.i_ab_q, q.ind_a_given_b, q.ind_b_given_a, q.d_q,
        tom.h_a0, tom.h_b0, tom.h_ab0, tom.j_tom, tom.d_discord_tom,
        tom.ind_a_given_b_tom, tom.ind_b_given_a_tom, tom.d_tom,
        opt.basis_a_opt.theta, opt.basis_a_opt.phi, opt.basis_b_opt.theta, opt.basis_b_opt.phi,
        opt.j_opt, opt.h_a_opt, opt.h_b_opt, opt.d_discord_opt,
        opt.ind_a_given_b_opt, opt.ind_b_given_a_opt, opt.d_opt,
        x_type, q.degenerate or tom.degenerate or opt.degenerate,
        phi_a, phi_b, residual, opt.converged, np.array(state.rho_ab),
    )


def random_pure_state(rng: np.random.Generator) -> BipartiteState:
    alpha = rng.uniform(0.01, 0.99)
    t = rng.uniform(0.0, math.pi, size=2)
    p = rng.uniform(0.0, 2 * math.pi, size=2)
    return make_pure_schmidt(
        PureSchmidtParams(alpha, MeasurementBasis(t[0], p[0]), MeasurementBasis(t[1], p[1]))
    )


def _run_one(job) -> EnsembleRecord:
    index, seed, state_class, settings = job
    rng = make_rng(seed)
    x_params = None
    if state_class == "x":
        x_params = generate_x_state(rng)
        state = x_params.state()
    elif state_class == "mixed":
        state = generate_mixed_state(rng)
    elif state_class == "pure":
        state = random_pure_state(rng)
    else:
        raise ValueError(f"unknown state class {state_class!r}")
    settings = dataclasses.replace(settings, seed=seed)
    return analyze_state(state, settings, x_params, index, seed, state_class)


@dataclass(frozen=True)
class SummaryStats:
    n_total: int
    n_used: int
    n_excluded: int
    pearson_r_dtom_dopt: Optional[float]
    pearson_r_dq_dopt: Optional[float]
    pearson_r_dq_dtom: Optional[float]
    slope_dopt_on_dtom: Optional[float]
    slope_dopt_on_dq: Optional[float]
    sign_agreement_fraction: Optional[float]
    type_i_count: Optional[int] = None
    type_ii_count: Optional[int] = None
    inconsistent_count: Optional[int] = None


def pearson_r(x, y) -> Optional[float]:
    """Pearson correlation, ``None`` when either variable has zero variance.

    Sums use ``math.fsum`` so the value does not depend on record order.
    """
    n = len(x)
    if n < 2 or n != len(y):
        return None
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    if sxx <= 0.0 or syy <= 0.0:
        return None
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def slope_through_origin(x, y) -> Optional[float]:
    """Least-squares slope of ``y = k x`` (no intercept)."""
    sxx = math.fsum(a * a for a in x)
    if len(x) < 2 or sxx <= 0.0:
        return None
    return math.fsum(a * b for a, b in zip(x, y)) / sxx


def compute_stats(records) -> SummaryStats:
    used = [r for r in records if not r.degenerate]
    dq = [float(r.d_q) for r in used]
    dt = [float(r.d_tom) for r in used]
    do = [float(r.d_opt) for r in used]
    sign = sum(1 for a, b in zip(dt, do) if a * b > 0) / len(used) if used else None

    types = {}
    if records and all(r.state_class == "x" for r in records):
        types = dict(
            type_i_count=sum(r.x_type == "I" for r in records),
            type_ii_count=sum(r.x_type == "II" for r in records),
            inconsistent_count=sum(r.x_type == "inconsistent" for r in records),
        )
    return SummaryStats(
        len(records), len(used), len(records) - len(used),
        pearson_r(dt, do), pearson_r(dq, do), pearson_r(dq, dt),
        slope_through_origin(dt, do), slope_through_origin(dq, do),
        sign, **types,
    )


def run_ensemble(
    state_class: str,
    count: int,
    master_seed: int = 0,
    settings: Optional[OptimizationSettings] = None,
    workers: int = 1,
):
    """Generate and analyse ``count`` states; state ``k`` uses seed ``master_seed + k``.

    Returns ``(records, stats, seconds)``. Records are always in index order and
    do not depend on ``workers``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if state_class not in STATE_CLASSES:
        raise ValueError(f"state class must be one of {STATE_CLASSES}")
    settings = settings or OptimizationSettings()
    jobs = [(k, master_seed + k, state_class, settings) for k in range(count)]
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, jobs, chunksize=max(1, count // (4 * workers))))
    else:
        records = [_run_one(job) for job in jobs]
    return records, compute_stats(records), time.perf_counter() - t0


def write_csv(records, out, timestamp: bool = True, extra: Optional[dict] = None) -> None:
    """Write records in the fixed column order.

    ``extra`` maps additional column names to per-record value lists and is
    appended after the standard columns.
    """
    if timestamp:
        out.write(f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
    w = csv.writer(out, lineterminator="\n")
    extra = extra or {}
    w.writerow(CSV_FIELDS + list(extra))
    for k, rec in enumerate(records):
        w.writerow(rec.row() + [_fmt(v[k]) for v in extra.values()])


def csv_text(records, timestamp: bool = False) -> str:
    buf = io.StringIO()
    write_csv(records, buf, timestamp)
    return buf.getvalue()


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))
