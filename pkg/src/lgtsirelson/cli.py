"""Command-line front end.

Exit codes: 0 success, 1 invariant failure (``verify`` only), 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

from . import sweeps, verify
from .leggett_garg import ScenarioKind

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def angle(text: str) -> float:
    """Parse a float or a multiple of pi such as ``0.9pi``, ``pi/4``, ``0.9*pi``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a number or multiple of pi: {text!r}")
    coef = float(m.group(1)) if m.group(1) else 1.0
    denom = float(m.group(2)) if m.group(2) else 1.0
    if denom == 0:
        raise argparse.ArgumentTypeError(f"division by zero in {text!r}")
    return coef * math.pi / denom


def tol_override(text: str) -> tuple[str, float]:
    name, _, value = text.rpartition("=")
    try:
        tol = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}") from None
    if not tol >= 0:
        raise argparse.ArgumentTypeError(f"tolerance must be non-negative: {text!r}")
    return (name or "*", tol)


def scenario(text: str) -> ScenarioKind:
    try:
        return ScenarioKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(table: sweeps.CsvTable, out: str | None) -> None:
    if out and out != "-":
        table.write(out)
    else:
        sys.stdout.write(table.to_csv())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgtsirelson",
        description="Leggett-Garg K3 audits for the normalized two-exponential qubit family.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every invariant suite")
    v.add_argument("--samples", type=int, default=20, help="random parameter samples per suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument(
        "--tol",
        type=tol_override,
        action="append",
        default=[],
        metavar="[NAME=]X",
        help="override one invariant's tolerance, or all of them when NAME is omitted",
    )
    v.add_argument("--only", action="append", choices=verify.INVARIANT_NAMES, help="restrict to named invariants")
    v.add_argument("--inject-fault", action="append", default=[], choices=sorted(verify.FAULTS), help=argparse.SUPPRESS)

    for name, helptext in (("energy", "E_p(t) curve"), ("tau", "phase integral tau(t) curve")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--phi", type=angle, required=True)
        c.add_argument("--alpha", type=angle, required=True)
        c.add_argument("--t-min", type=angle, default=0.0)
        c.add_argument("--t-max", type=angle, default=math.pi)
        c.add_argument("--points", type=int, default=sweeps.CURVE_POINTS)
        c.add_argument("--out", default=None)

    k = sub.add_parser("k3", help="correlators, K3 and composition defect versus T")
    k.add_argument("--phi", type=angle, required=True)
    k.add_argument("--alpha", type=angle, required=True)
    k.add_argument("--scenario", type=scenario, required=True, metavar="exp|a|b")
    k.add_argument("--T-min", type=angle, default=0.0)
    k.add_argument("--T-max", type=angle, default=math.pi)
    k.add_argument("--points", type=int, default=sweeps.CURVE_POINTS)
    k.add_argument("--out", default=None)

    m = sub.add_parser("k3max", help="K3 maximized over T in [0, pi], versus alpha")
    m.add_argument("--phi", type=angle, required=True)
    m.add_argument("--scenario", type=scenario, required=True, metavar="exp|a|b")
    m.add_argument("--alpha-min", type=angle, default=0.0)
    m.add_argument("--alpha-max", type=angle, default=math.pi / 4)
    m.add_argument("--points", type=int, default=sweeps.K3MAX_POINTS)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--out", default=None)

    f = sub.add_parser("figure", help="write the CSV data behind one of figures 1, 2, 4, 5")
    f.add_argument("fig_id", type=int)
    f.add_argument("--out", default=".", help="output directory")
    f.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            if args.samples < 1:
                parser.error("--samples must be a positive integer")
            outcomes = verify.run(
                samples=args.samples,
                seed=args.seed,
                tol_overrides=dict(args.tol),
                faults=tuple(args.inject_fault),
                only=tuple(args.only) if args.only else None,
            )
            print(verify.report(outcomes))
            return 0 if all(o.passed for o in outcomes) else 1
        if args.command == "energy":
            _emit(sweeps.cmd_energy(args.phi, args.alpha, args.t_min, args.t_max, args.points), args.out)
        elif args.command == "tau":
            _emit(sweeps.cmd_tau(args.phi, args.alpha, args.t_min, args.t_max, args.points), args.out)
        elif args.command == "k3":
            table = sweeps.cmd_k3(args.phi, args.alpha, args.scenario, args.T_min, args.T_max, args.points)
            _emit(table, args.out)
        elif args.command == "k3max":
            table = sweeps.cmd_k3max(
                args.phi, args.scenario, args.alpha_min, args.alpha_max, args.points, args.workers
            )
            _emit(table, args.out)
        elif args.command == "figure":
            for path in sweeps.cmd_figure(args.fig_id, args.out, args.workers):
                print(path)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
