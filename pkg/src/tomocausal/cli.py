"""Command-line interface: ``tomocausal {analyze,ensemble,sweep-pure,verify}``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys

import numpy as np

from tomocausal import kernels
from tomocausal.correlations import BipartiteState
from tomocausal.ensemble import (
    STATE_CLASSES,
    analyze_state,
    run_ensemble,
    write_csv,
)
from tomocausal.linalg import InvalidStateError
from tomocausal.optimizer import OptimizationSettings
from tomocausal.states import PureSchmidtParams, XStateParams, make_pure_schmidt
from tomocausal.verify import SUITES, run_suite

log = logging.getLogger("tomocausal")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _preset(name: str):
    """Return ``(state, x_params)`` for ``bell``, ``product`` or ``werner:p``."""
    if name == "bell":
        x = XStateParams(0.5, 0.0, 0.0, 0.5, 0.5, 0j)
        return x.state(), x
    if name == "product":
        rho_a = np.array([[0.7, 0.1 - 0.2j], [0.1 + 0.2j, 0.3]])
        rho_b = np.array([[0.4, 0.0], [0.0, 0.6]])
        return BipartiteState.from_matrix(np.kron(rho_a, rho_b)), None
    if name.startswith("werner:"):
        try:
            p = float(name.split(":", 1)[1])
            x = XStateParams.werner(p)
        except ValueError as exc:
            raise InputError(f"bad Werner preset {name!r}: {exc}") from exc
        return x.state(), x
    raise InputError(f"unknown preset {name!r} (bell, product, werner:p)")


def _x_from_mapping(d: dict) -> XStateParams:
    def cplx(v):
        if isinstance(v, (list, tuple)):
            return complex(v[0], v[1])
        return complex(v)

    try:
        return XStateParams(
            float(d["rho11"]), float(d["rho22"]), float(d["rho33"]), float(d["rho44"]),
            cplx(d.get("rho14", 0)), cplx(d.get("rho23", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad X-state parameters: {exc}") from exc


def _matrix_from_pairs(pairs) -> np.ndarray:
    try:
        flat = np.array([complex(re, im) for re, im in pairs])
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix must be 16 [re, im] pairs: {exc}") from exc
    if flat.size != 16:
        raise InputError(f"matrix must have 16 entries, got {flat.size}")
    return flat.reshape(4, 4)


def _load_file(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("state file must hold a JSON object")
    if "x_state" in data:
        x = _x_from_mapping(data["x_state"])
        return x.state(), x
    if "matrix" in data:
        return BipartiteState.from_matrix(_matrix_from_pairs(data["matrix"])), None
    raise InputError("state file needs a 'matrix' or an 'x_state' entry")


def _settings(args) -> OptimizationSettings:
    return OptimizationSettings(random_starts=args.starts, seed=args.seed)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def cmd_analyze(args) -> int:
    if args.preset:
        state, x = _preset(args.preset)
    elif args.x:
        keys = ("rho11", "rho22", "rho33", "rho44", "rho14", "rho23")
        x = _x_from_mapping(dict(zip(keys, args.x)))
        state = x.state()
    elif args.file:
        state, x = _load_file(args.file)
    else:
        raise InputError("give one of --preset, --x or --file")
    rec = analyze_state(state, _settings(args), x, seed=args.seed, state_class="x" if x else "")
    out, close = _open_out(args.out)
    try:
        json.dump(rec.to_json(), out, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def _stats_line(stats) -> str:
    return json.dumps(dataclasses.asdict(stats))


def cmd_ensemble(args) -> int:
    records, stats, seconds = run_ensemble(args.state_class, args.count, args.seed,
                                           _settings(args), args.workers)
    out, close = _open_out(args.out)
    try:
        if args.format == "csv":
            write_csv(records, out, timestamp=not args.no_timestamp)
        else:
            json.dump({"records": [r.to_json() for r in records],
                       "stats": dataclasses.asdict(stats)}, out, indent=1)
            out.write("\n")
    finally:
        if close:
            out.close()
    print(_stats_line(stats), file=sys.stderr)
    print(f"{len(records)} states in {seconds:.2f} s ({kernels.BACKEND} kernels)", file=sys.stderr)
    return EXIT_OK


def cmd_sweep_pure(args) -> int:
    alphas = [(k + 1) / (args.steps + 1) for k in range(args.steps)]
    settings = _settings(args)
    records = []
    for k, a in enumerate(alphas):
        state = make_pure_schmidt(PureSchmidtParams(a))
        records.append(analyze_state(state, settings, index=k, seed=args.seed, state_class="pure"))
    out, close = _open_out(args.out)
    try:
        if args.format == "csv":
            write_csv(records, out, timestamp=not args.no_timestamp, extra={"alpha": alphas})
        else:
            rows = []
            for a, r in zip(alphas, records):
                row = r.to_json()
                row["alpha"] = a
                rows.append(row)
            json.dump(rows, out, indent=1)
            out.write("\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, args.count, args.seed, _settings(args), args.workers)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tomocausal", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(seed=0):
        # a fresh parent per subcommand: argparse shares parent actions
        parent = argparse.ArgumentParser(add_help=False)
        parent.add_argument("--seed", type=int, default=seed, help="master seed")
        parent.add_argument("--starts", type=int, default=24, help="random optimiser starts")
        parent.add_argument("--out", default=None, help="output path (default stdout)")
        parent.add_argument("--workers", type=int, default=1)
        return parent

    p = sub.add_parser("analyze", parents=[common()], help="analyse a single state (JSON)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--preset", help="bell | product | werner:p")
    g.add_argument("--x", nargs=6, metavar=("R11", "R22", "R33", "R44", "R14", "R23"),
                   help="X-state entries; coherences as Python complex literals, e.g. 0.1+0.05j")
    g.add_argument("--file", help="JSON file with 'matrix' (16 [re, im] pairs) or 'x_state'")
    p.set_defaults(func=cmd_analyze)

    for name, func, helptext in (
        ("ensemble", cmd_ensemble, "random ensemble with summary statistics"),
        ("sweep-pure", cmd_sweep_pure, "sweep the Schmidt coefficient of pure states"),
    ):
        p = sub.add_parser(name, parents=[common()], help=helptext)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the '# generated' header line")
        if name == "ensemble":
            p.add_argument("--class", dest="state_class", choices=STATE_CLASSES, default="mixed")
            p.add_argument("--count", type=int, default=1000)
        else:
            p.add_argument("--steps", type=int, default=49)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common(seed=1)], help="run invariant suites")
    p.add_argument("suite", nargs="?", default="all", choices=SUITES + ("all",))
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    log.debug("kernel backend: %s", kernels.BACKEND)
    try:
        return args.func(args)
    except (InputError, InvalidStateError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
