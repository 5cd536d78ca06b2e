"""Command-line interface.

Exit codes: 0 success, 1 invalid arguments or input document, 2 unknown
scenario, 3 a required assumption is violated, 4 a property suite found a
counterexample.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .distribution import gamma_table, load_distribution
from .errors import LdpFairError, UnknownScenario
from .model import flip_thresholds
from .report import emit_report, exact, num, write_output
from .scenarios import NAMES, builtin_scenario, default_eps_grid
from .simulation import ExperimentConfig, load_config, run_experiment
from .theory import HOLDS, VIOLATED, analyze, check_assumptions
from .verify import run_all

EXIT_OK, EXIT_INPUT, EXIT_SCENARIO, EXIT_ASSUMPTION, EXIT_PROPERTY = 0, 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for unknown scenarios
    def error(self, message):
        raise _UsageError(message)


def _eps_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise _UsageError(f"--eps expects a comma-separated list of numbers, got {text!r}") from None
    if not vals:
        raise _UsageError("--eps is empty")
    return vals


def _add_source(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--scenario", help="builtin scenario name")
    src.add_argument("--dist", help="path to a distribution JSON document")


def _add_eps(p):
    p.add_argument("--eps", type=_eps_list, help="comma-separated privacy levels")
    p.add_argument("--eps-min", type=float)
    p.add_argument("--eps-max", type=float)
    p.add_argument("--points", type=int)


def _add_output(p, per_group=False):
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", help="write here instead of standard output")
    if per_group:
        p.add_argument("--per-group", action="store_true",
                       help="also emit acceptance and true-positive rates per group")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ldpfair", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sc = sub.add_parser("scenarios", help="list builtin scenarios")
    sc.add_argument("action", choices=("list",))
    sc.add_argument("--format", choices=("text", "json"), default="text")

    for name, text in (
        ("analyze", "closed-form metrics at the given privacy levels"),
        ("sweep", "closed-form metrics over a dense log-spaced grid"),
    ):
        p = sub.add_parser(name, help=text)
        _add_source(p)
        _add_eps(p)
        _add_output(p, per_group=True)
        p.add_argument("--require-assumptions", nargs="?", const="uniform",
                       choices=("uniform", "reliable-y", "all"))

    p = sub.add_parser("thresholds", help="per-x flip thresholds")
    _add_source(p)
    _add_output(p)

    p = sub.add_parser("assumptions", help="assumption diagnostics")
    _add_source(p)
    _add_output(p)
    p.add_argument("--require-assumptions", nargs="?", const="uniform",
                   choices=("uniform", "reliable-y", "all"))

    p = sub.add_parser("simulate", help="Monte Carlo experiment")
    _add_source(p)
    _add_eps(p)
    _add_output(p, per_group=True)
    p.add_argument("--config", help="experiment config JSON (overrides other flags)")
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--n", type=int, default=1000, help="random distributions per family")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    return parser


def _source(args):
    """Return (label, distribution)."""
    if args.dist:
        return args.dist, load_distribution(args.dist)
    name = args.scenario or "S1"
    return name, builtin_scenario(name).dist


def _grid(args, label: str, dense: bool = False) -> list[float]:
    if args.eps is not None:
        if any(v is not None for v in (args.eps_min, args.eps_max, args.points)):
            raise _UsageError("--eps cannot be combined with --eps-min/--eps-max/--points")
        return args.eps
    if dense or any(v is not None for v in (args.eps_min, args.eps_max, args.points)):
        lo = 0.05 if args.eps_min is None else args.eps_min
        hi = 16.0 if args.eps_max is None else args.eps_max
        n = 50 if args.points is None else args.points
        if not (0 < lo <= hi and math.isfinite(hi)) or n < 1:
            raise _UsageError("need 0 < --eps-min <= --eps-max and --points >= 1")
        return [float(v) for v in np.geomspace(lo, hi, n)]
    return list(default_eps_grid(label))


def _violated(report, which: Optional[str]) -> Optional[str]:
    if which is None:
        return None
    if which in ("uniform", "all") and report.uniform_discrimination.status == VIOLATED:
        ud = report.uniform_discrimination
        return (f"uniform discrimination violated: x={ud.x_favoring_1} favours group 1, "
                f"x={ud.x_favoring_0} favours group 0")
    if which in ("reliable-y", "all") and report.reliable_y.status != HOLDS:
        return f"reliable Y violated at x={report.reliable_y.witness}"
    return None


def _cmd_scenarios(args):
    if args.format == "json":
        doc = [{"name": n, "notes": builtin_scenario(n).notes} for n in NAMES]
        write_output(json.dumps(doc, indent=2) + "\n")
    else:
        write_output("".join(n + "\n" for n in NAMES))
    return EXIT_OK


def _cmd_analyze(args, dense=False):
    label, dist = _source(args)
    eps = _grid(args, label, dense)
    report = analyze(dist, eps, label)
    problem = _violated(report.assumptions, args.require_assumptions)
    if problem:
        print(problem, file=sys.stderr)
        return EXIT_ASSUMPTION
    write_output(emit_report(report, args.format, per_group=args.per_group), args.out)
    return EXIT_OK


def _cmd_thresholds(args):
    label, dist = _source(args)
    write_output(emit_report(flip_thresholds(dist), args.format, scenario=label), args.out)
    return EXIT_OK


def _cmd_assumptions(args):
    label, dist = _source(args)
    report = check_assumptions(dist)
    gamma = gamma_table(dist)
    extra = {
        "gamma": {x: {str(a): num(gamma[(x, a)]) for a in (1, 0)} for x in dist.x_domain},
        "gamma_exact": {x: {str(a): exact(gamma[(x, a)]) for a in (1, 0)} for x in dist.x_domain},
    }
    write_output(emit_report(report, args.format, scenario=label, extra=extra), args.out)
    problem = _violated(report, args.require_assumptions)
    if problem:
        print(problem, file=sys.stderr)
        return EXIT_ASSUMPTION
    return EXIT_OK


def _cmd_simulate(args):
    if args.config:
        config = load_config(args.config)
        dist = None
    else:
        label, dist = _source(args)
        config = ExperimentConfig(
            scenario=label,
            eps_grid=tuple(_grid(args, label)),
            n=args.n,
            runs=args.runs,
            seed=args.seed,
            train_fraction=args.train_fraction,
        )
    result = run_experiment(config, workers=args.workers, dist=dist)
    write_output(emit_report(result, args.format, per_group=args.per_group), args.out)
    return EXIT_OK


def _cmd_verify(args):
    if args.n < 1:
        raise _UsageError("--n must be >= 1")
    suites = run_all(args.n, args.seed)
    write_output(emit_report(suites, args.format), args.out)
    return EXIT_OK if all(s.passed for s in suites) else EXIT_PROPERTY


_COMMANDS = {
    "scenarios": _cmd_scenarios,
    "analyze": _cmd_analyze,
    "sweep": lambda a: _cmd_analyze(a, dense=True),
    "thresholds": _cmd_thresholds,
    "assumptions": _cmd_assumptions,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
        return _COMMANDS[args.command](args)
    except UnknownScenario as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except (_UsageError, LdpFairError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry():
    sys.exit(main())
