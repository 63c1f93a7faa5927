"""Command-line front end: solve, verify, export.

Exit codes are a stable scripting contract: 0 success, 1 numerical
failure (no cycle, verification below the digit floor), 2 configuration
or I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .continuation import (
    ContinuationError,
    ContinuationSchedule,
    initial_guess_h5,
    lift,
    run,
)
from .hbsystem import LorenzParams, ResidualSystem, pack
from .newton import NewtonConfig
from .solution_io import (
    SolutionFile,
    SolutionFormatError,
    export_coefficient_tables,
    export_svg,
    export_trajectory_csv,
    load_solution,
    save_solution,
)
from .taylor_verify import TaylorConfig, verify_cycle

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2


def _truncate_decimals(x: float, places: int) -> str:
    """Leading decimal digits without rounding, the reporting convention here."""
    scaled = math.floor(abs(x) * 10**places) / 10**places
    return f"{math.copysign(scaled, x):.{places}f}"


def _parse_schedule(text: str) -> tuple[int, ...]:
    try:
        steps = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}: {err}") from err
    if not steps:
        raise argparse.ArgumentTypeError("schedule must name at least one harmonic count")
    return steps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorenzhb",
        description="Periodic orbits of the Lorenz system by harmonic balance.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run the continuation pipeline and save the cycle")
    p_solve.add_argument("--h-schedule", type=_parse_schedule, default=None,
                         metavar="H1,H2,...", help="harmonic counts (default 5,10,...,35)")
    p_solve.add_argument("--tol", type=float, default=1e-8, help="Newton residual max-norm")
    p_solve.add_argument("--max-iter", type=int, default=200, help="Newton iteration cap")
    p_solve.add_argument("--damping", type=float, default=1.0, help="Newton step damping in (0,1]")
    p_solve.add_argument("--sigma", type=float, default=10.0)
    p_solve.add_argument("--r", type=float, default=28.0)
    p_solve.add_argument("--b", type=float, default=8.0 / 3.0)
    p_solve.add_argument("--anchor", type=float, default=None,
                         help="section height for x3 at t=0 (default r-1)")
    p_solve.add_argument("--raw-seed", action="store_true",
                         help="skip the parity projection of the starting guess")
    p_solve.add_argument("--output", default="solution.json", help="solution file to write")

    p_verify = sub.add_parser("verify", help="round-trip a saved cycle through the flow")
    p_verify.add_argument("solution", help="solution file produced by solve")
    p_verify.add_argument("--series-tol", type=float, default=1e-25,
                          help="Taylor series truncation tolerance")
    p_verify.add_argument("--max-order", type=int, default=60)
    p_verify.add_argument("--precision-bits", type=int, default=100)
    p_verify.add_argument("--min-digits", type=int, default=7,
                          help="required forward round-trip digits for exit 0")

    p_export = sub.add_parser("export", help="write tables, trajectories or a plot")
    p_export.add_argument("solution", help="solution file produced by solve")
    p_export.add_argument("--format", required=True,
                          choices=("csv-tables", "trajectory-csv", "svg"))
    p_export.add_argument("--output", default=None,
                          help="output directory (csv-tables) or file (others)")
    p_export.add_argument("--samples", type=int, default=2048,
                          help="trajectory samples per period")
    return parser


def cmd_solve(args) -> int:
    try:
        params = LorenzParams(args.sigma, args.r, args.b)
        cfg = NewtonConfig(tol=args.tol, max_iter=args.max_iter, step_damping=args.damping)
        schedule = ContinuationSchedule(args.h_schedule, cfg) if args.h_schedule else \
            ContinuationSchedule(cfg=cfg)
        if schedule.steps[0] < 5:
            raise ValueError("the stock starting guess lives at h=5; schedules must start at 5 or higher")
        seed = lift(initial_guess_h5(), schedule.steps[0])
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run(params, schedule, seed,
                     anchor=args.anchor, symmetrize_seed=not args.raw_seed)
    except ContinuationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL

    sol = result.solution
    final_sys = ResidualSystem(params, sol.h, anchor=args.anchor)
    residual_norm = float(np.max(np.abs(final_sys.residual(pack(sol)))))
    sf = SolutionFile(
        solution=sol,
        params=params,
        anchor=final_sys.anchor,
        provenance={
            "generator": f"lorenzhb {__version__}",
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "schedule": list(schedule.steps),
            "newton_tol": schedule.cfg.tol,
            "newton_iterations": [r.iterations for r in result.reports],
            "residual_norm": residual_norm,
        },
    )
    try:
        save_solution(sf, args.output)
    except OSError as err:
        print(f"error: cannot write {args.output}: {err}", file=sys.stderr)
        return EXIT_CONFIG

    x0 = sol.state_at(0.0)
    print(f"period T = {_truncate_decimals(sol.period, 9)}  (omega = {float(sol.omega)!r})")
    print(f"x(0) = ({x0[0]:.9f}, {x0[1]:.9f}, {x0[2]:.9f})")
    print(f"residual max-norm = {residual_norm:.3e}")
    print("newton iterations: "
          + "  ".join(f"h={h}:{r.iterations}" for h, r in zip(schedule.steps, result.reports)))
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        sf = load_solution(args.solution)
        cfg = TaylorConfig(series_tol=args.series_tol, max_order=args.max_order,
                           precision_bits=args.precision_bits)
    except (SolutionFormatError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    report = verify_cycle(sf.solution, cfg, sf.params)
    print(f"period T = {report.period!r}")
    print(f"{'':12s}{'forward |x(T)-x(0)|':>22s}  {'digits':>6s}"
          f"{'reverse |x_b(0)-x(0)|':>24s}  {'digits':>6s}")
    names = ("x1", "x2", "x3")
    for i, name in enumerate(names):
        fe = report.roundtrip_errors[i]
        re_ = report.reverse_errors[i]
        fd = 999 if fe <= 0 else int(math.floor(-math.log10(fe)))
        rd = 999 if re_ <= 0 else int(math.floor(-math.log10(re_)))
        print(f"{name:12s}{fe:>22.3e}  {fd:>6d}{re_:>24.3e}  {rd:>6d}")
    print(f"round trip: {report.digits_roundtrip} digits, reverse: {report.digits_reverse} digits")
    if report.digits_roundtrip >= args.min_digits:
        return EXIT_OK
    print(f"error: round trip below the {args.min_digits}-digit floor", file=sys.stderr)
    return EXIT_NUMERICAL


def cmd_export(args) -> int:
    try:
        sf = load_solution(args.solution)
    except (SolutionFormatError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.format == "csv-tables":
            paths = export_coefficient_tables(sf, args.output or ".")
        elif args.format == "trajectory-csv":
            paths = [export_trajectory_csv(sf, args.output or "trajectory.csv", args.samples)]
        else:
            paths = [export_svg(sf, args.output or "cycle.svg", args.samples)]
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"error: cannot write output: {err}", file=sys.stderr)
        return EXIT_CONFIG

    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "solve":
        return cmd_solve(args)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_export(args)


if __name__ == "__main__":
    sys.exit(main())
