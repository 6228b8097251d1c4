"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from tomocausal import _pykernels
from tomocausal.states import generate_mixed_state, make_rng
from tomocausal.tomography import bloch_coefficients

try:
    from tomocausal import _kernels
except ImportError:
    _kernels = None


def cases():
    s = generate_mixed_state(make_rng(0))
    coef = bloch_coefficients(s.rho_ab)
    herm = s.rho_ab.copy()
    x0 = np.array([0.4, 1.1, 2.0, 0.3])
    return {
        "mutual_information": lambda k: k.mutual_information(coef, 0.4, 1.1, 2.0, 0.3),
        "nelder_mead_max": lambda k: k.nelder_mead_max(coef, x0),
        "jacobi_eigh (4x4)": lambda k: k.jacobi_eigh(herm),
    }


def time_case(fn, mod, repeat):
    n, _ = timeit.Timer(lambda: fn(mod)).autorange()
    return min(timeit.repeat(lambda: fn(mod), number=n, repeat=repeat)) / n


def time_optimizer(pure: bool, count: int) -> float:
    # the backend is chosen at import, so each run gets its own interpreter
    env = dict(os.environ)
    env.pop("TOMOCAUSAL_PURE_PYTHON", None)
    if pure:
        env["TOMOCAUSAL_PURE_PYTHON"] = "1"
    code = (
        "import time; from tomocausal.ensemble import run_ensemble\n"
        f"t=time.perf_counter(); run_ensemble('mixed', {count}, 0)\n"
        "print(time.perf_counter()-t)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip()) / count


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--states", type=int, default=20, help="states for the end-to-end timing")
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'kernel':<24}{'python':>14}{'cython':>14}{'speedup':>10}")
    for name, fn in cases().items():
        tp = time_case(fn, _pykernels, args.repeat)
        tc = time_case(fn, _kernels, args.repeat) if _kernels else float("nan")
        print(f"{name:<24}{tp * 1e6:>12.1f}us{tc * 1e6:>12.1f}us{tp / tc:>9.1f}x")
    tp = time_optimizer(True, args.states)
    tc = time_optimizer(False, args.states) if _kernels else float("nan")
    print(f"{'full analysis / state':<24}{tp * 1e3:>12.1f}ms{tc * 1e3:>12.1f}ms{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
