"""Command-line front end.

Exit status: 0 success, 1 an inequality verdict failed, 2 bad input
(parse/evaluation/argument errors), 3 shape errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections import Counter

from . import __version__
from .funcspec import EvaluationError, FunctionSpec, ParseError, ShapeError, check_shape
from .hhmaps import sweep_maps
from .oracle import OracleError, reference_integral
from .ostrowski import PROBES, sharpness_probe
from .quadrature import Interval, UniformPartition, hh_enclosure
from .refine import RefinementPolicy, integrate_to_tolerance
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FALSIFIED, EXIT_INPUT, EXIT_SHAPE = 0, 1, 2, 3


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def _json(command: str, inputs: dict, results, verdicts) -> str:
    report = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "verdicts": verdicts,
        "version": __version__,
    }
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _function(args) -> tuple[FunctionSpec, Interval]:
    interval = Interval(args.a, args.b)
    if args.shape == "auto":
        probe = FunctionSpec.from_text(args.function)
        report = check_shape(probe, interval, grid_points=201, tol=1e-9)
        flags = {s for s in ("convex", "concave") if getattr(report, s).passed}
        if not flags:
            raise ShapeError(f"{args.function} is neither convex nor concave on [{args.a}, {args.b}]")
    else:
        flags = {args.shape}
    return FunctionSpec.from_text(args.function, flags), interval


def cmd_integrate(args):
    if (args.n is None) == (args.tol is None):
        raise ValueError("integrate needs exactly one of --n and --tol")
    f, interval = _function(args)
    if args.n is not None:
        enc = hh_enclosure(f, UniformPartition(interval, args.n))
        rows, status = [(enc.n_used, enc.lower, enc.upper, enc.width)], "fixed_n"
    else:
        policy = RefinementPolicy(abs_tol=args.tol, n_max=args.n_max)
        enc, trace = integrate_to_tolerance(f, interval, policy)
        rows, status = [tuple(r) for r in trace.rows], trace.status
    if args.output == "csv":
        return _csv(("n", "lower", "upper", "width"), rows), EXIT_OK
    results = {
        "lower": enc.lower,
        "upper": enc.upper,
        "width": enc.width,
        "n_used": enc.n_used,
        "orientation": enc.orientation,
        "status": status,
        "trace": [dict(zip(("n", "lower", "upper", "width"), r)) for r in rows],
    }
    verdicts = {"converged": status != "n_max_reached"}
    return _json("integrate", _inputs(args), results, verdicts), EXIT_OK


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    records = []
    for name in names:
        suite = run_suite(name, args.trials, args.seed, args.f_map_halved, args.weighted_unscaled, args.t_steps)
        for trial, report in suite:
            records.append((name, trial, report))
    checked, failed = Counter(), Counter()
    for _, _, r in records:
        checked[r.theorem_id] += 1
        failed[r.theorem_id] += not r.holds
    status = EXIT_FALSIFIED if sum(failed.values()) else EXIT_OK
    if args.output == "csv":
        rows = [(t, r.theorem_id, r.n, r.y, r.lhs, r.rhs, r.slack, r.holds) for _, t, r in records]
        return _csv(("trial", "theorem", "n", "y", "lhs", "rhs", "slack", "holds"), rows), status
    results = [{"suite": s, "trial": t, **r.as_dict()} for s, t, r in records]
    verdicts = {
        "all_hold": status == EXIT_OK,
        "checked": sum(checked.values()),
        "failed": sum(failed.values()),
        "by_theorem": {k: {"checked": checked[k], "failed": failed[k]} for k in sorted(checked)},
    }
    return _json("verify", _inputs(args), results, verdicts), status


def cmd_sharpness(args):
    interval = Interval(args.a, args.b)
    results = [sharpness_probe(tid, interval, args.n) for tid in PROBES]
    ok = all(r.passed for r in results)
    if args.output == "csv":
        rows = [(r.theorem_id, r.measured_constant, r.paper_constant, r.passed) for r in results]
        return _csv(("theorem", "measured", "expected", "passed"), rows), EXIT_OK if ok else EXIT_FALSIFIED
    payload = [
        {
            "theorem": r.theorem_id,
            "fixture": r.fixture,
            "measured": r.measured_constant,
            "expected": r.paper_constant,
            "passed": r.passed,
        }
        for r in results
    ]
    return _json("sharpness", _inputs(args), payload, {"all_pass": ok}), EXIT_OK if ok else EXIT_FALSIFIED


def cmd_maps(args):
    f, interval = _function(args)
    if not f.is_convex:
        raise ShapeError("the H and F maps are defined for convex functions")
    sweep = sweep_maps(f, UniformPartition(interval, args.n), args.t_steps, args.f_map_halved)
    rows = list(zip(sweep.t.tolist(), sweep.H.tolist(), sweep.F.tolist()))
    if args.output == "csv":
        return _csv(("t", "H", "F"), rows), EXIT_OK
    results = [{"t": t, "H": h, "F": F} for t, h, F in rows]
    return _json("maps", _inputs(args), results, {}), EXIT_OK


def cmd_oracle(args):
    f = FunctionSpec.from_text(args.function)
    value, uncertainty = reference_integral(f, Interval(args.a, args.b))
    if args.output == "csv":
        return _csv(("value", "uncertainty"), [(value, uncertainty)]), EXIT_OK
    return _json("oracle", _inputs(args), {"value": value, "uncertainty": uncertainty}, {}), EXIT_OK


def _inputs(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("handler",)}


def _default_seed() -> int:
    return int(os.environ.get("HH_SEED", "0"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hhsandwich", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, function=True, default_b=None):
        if function:
            p.add_argument("--function", "-f", required=True, help="expression in x, e.g. 'x^2'")
        p.add_argument("--a", type=float, required=default_b is None, default=0.0)
        p.add_argument("--b", type=float, required=default_b is None, default=default_b)
        p.add_argument("--output", choices=("json", "csv"), default="json")

    p = sub.add_parser("integrate", help="certified enclosure of the integral")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--n-max", type=int, default=1 << 20)
    p.add_argument("--shape", choices=("convex", "concave", "auto"), default="auto")
    p.set_defaults(handler=cmd_integrate)

    p = sub.add_parser("verify", help="seeded property suites")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--t-steps", type=int, default=100)
    p.add_argument("--f-map-halved", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--weighted-unscaled", action="store_true")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("sharpness", help="best constants on the identity fixture")
    common(p, function=False, default_b=1.0)
    p.add_argument("--n", type=int, default=8)
    p.set_defaults(handler=cmd_sharpness)

    p = sub.add_parser("maps", help="table of H(t) and F(t)")
    common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--t-steps", type=int, default=10)
    p.add_argument("--shape", choices=("convex", "concave", "auto"), default="auto")
    p.add_argument("--f-map-halved", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(handler=cmd_maps)

    p = sub.add_parser("oracle", help="brute-force reference integral")
    common(p)
    p.set_defaults(handler=cmd_oracle)
    return parser


def run(argv=None) -> tuple[str, int]:
    """Parse ``argv`` and execute; returns (report text, exit status)."""
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ShapeError as exc:
        return f"shape error: {exc}\n", EXIT_SHAPE
    except (ParseError, EvaluationError, OracleError, ValueError) as exc:
        return f"error: {exc}\n", EXIT_INPUT


def main(argv=None) -> int:
    text, status = run(argv)
    stream = sys.stdout if status in (EXIT_OK, EXIT_FALSIFIED) else sys.stderr
    stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
