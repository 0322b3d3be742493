"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 empty feasible set, 3 check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import ExitStack
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from . import actuator, gear_model as gm
from .gear_model import SpecError
from .specfile import load_actuators, load_spec
from .synthesizer import SWEEP_PARAMETERS, Solution, SolutionSet, synthesize, sweep

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_CHECK = 0, 1, 2, 3

SYNTH_COLUMNS = (
    "rank", "z_sun", "z_planet_in", "z_planet_out", "z_ring_fixed", "z_ring_out",
    "n_planets", "cost", "ratio", "clearance_rad", "clearance_deg",
    "d_sun_mm", "d_planet_in_mm", "d_planet_out_mm", "d_ring_fixed_mm", "d_ring_out_mm",
)
CHECK_COLUMNS = ("constraint", "satisfied", "residual", "note")
SWEEP_COLUMNS = (
    "parameter", "value", "status", "feasible_count", "z_sun", "z_planet_in",
    "z_planet_out", "z_ring_fixed", "z_ring_out", "cost", "ratio", "message",
)
ENVELOPE_COLUMNS = (
    "name", "gear_ratio", "peak_torque_nm", "motor_speed_rad_s", "reflected_inertia_kg_m2",
)

SPEC_HELP = """\
spec file format (key = value, '#' comments):
  target_ratio          required; integer, decimal or p/q
  rotor_bore_mm         required
  module_mm             required
  n_planets             default 4
  min_teeth_sun         default 17
  min_teeth_planet_in   default 17
  min_teeth_planet_out  default 17
  alpha_min_rad         default 0.1
  ratio_tolerance       default 0 (relative; 0 = exact ratio)
  top_k                 default 10

exit codes: 0 ok, 1 input error, 2 no feasible design, 3 check failed
"""


def fmt_real(x) -> str:
    return f"{x:.6f}"


def fmt_exact(value) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def fmt_residual(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt_real(value)
    return fmt_exact(value)


def fmt_decimal_exact(value: Fraction) -> str:
    """Fraction as a plain decimal when it terminates, else p/q."""
    d = value.denominator
    for prime in (2, 5):
        while d % prime == 0:
            d //= prime
    if d != 1:
        return fmt_exact(value)
    digits = 0
    while (value * 10 ** digits).denominator != 1:
        digits += 1
    return f"{float(value):.{digits}f}" if digits else str(value.numerator)


def solution_record(rank: int, sol: Solution) -> dict:
    d = sol.design
    diameters = gm.pitch_diameters(d)
    record = {"rank": rank}
    record.update(zip(gm.TEETH_FIELDS, d.teeth))
    record.update(
        n_planets=d.n_planets,
        cost=fmt_real(sol.cost),
        ratio=fmt_exact(sol.ratio),
        clearance_rad=fmt_real(sol.clearance_rad),
        clearance_deg=fmt_real(math.degrees(sol.clearance_rad)),
    )
    for col, dia in zip(SYNTH_COLUMNS[-5:], diameters):
        record[col] = fmt_real(dia)
    return record


def json_record(rank: int, sol: Solution) -> dict:
    """One JSONL object: rank, design, cost, ratio, clearance, pitch diameters."""
    d = sol.design
    return {
        "rank": rank,
        "design": {
            **dict(zip(gm.TEETH_FIELDS, d.teeth)),
            "n_planets": d.n_planets,
            "module_mm": fmt_decimal_exact(d.module_mm),
            "rotor_bore_mm": fmt_decimal_exact(d.rotor_bore_mm),
        },
        "cost": round(sol.cost, 6),
        "ratio": fmt_exact(sol.ratio),
        "clearance_rad": round(sol.clearance_rad, 6),
        "clearance_deg": round(math.degrees(sol.clearance_rad), 6),
        "pitch_diameters_mm": [round(x, 6) for x in gm.pitch_diameters(d)],
    }


def write_table(out, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    cells = [[str(c) for c in columns]] + [[str(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    for i, row in enumerate(cells):
        first, *rest = zip(row, widths)
        line = [first[0].ljust(first[1])] + [v.rjust(w) for v, w in rest]
        out.write("  ".join(line).rstrip() + "\n")
        if i == 0:
            out.write("  ".join("-" * w for w in widths) + "\n")


def write_csv(out, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)


def write_rows(out, fmt: str, columns, rows) -> None:
    if fmt == "csv":
        write_csv(out, columns, rows)
    elif fmt == "jsonl":
        for row in rows:
            out.write(json.dumps(dict(zip(columns, row))) + "\n")
    else:
        write_table(out, columns, rows)


def prune_summary(result: SolutionSet) -> str:
    lines = [f"no feasible design among {result.candidates_examined} candidates"]
    top = result.top_pruner()
    if top:
        lines.append(f"most candidates pruned by {top[0]} ({top[1]})")
    for name, count in result.prune_counts.items():
        if count:
            lines.append(f"  {name}: {count}")
    return "\n".join(lines) + "\n"


def _spec_path(args) -> Optional[str]:
    return getattr(args, "spec_file", None) or getattr(args, "spec", None)


def _load(args):
    path = _spec_path(args)
    if not path:
        raise SpecError("no spec file given (positional argument or --spec)")
    return load_spec(path)


def cmd_synth(args, out, err) -> int:
    spec = _load(args)
    if args.workers < 1:
        raise SpecError("workers must be >= 1")
    result = synthesize(spec, workers=args.workers)
    ranked = list(enumerate(result.solutions, start=1))
    if args.format == "jsonl":
        for rank, sol in ranked:
            out.write(json.dumps(json_record(rank, sol)) + "\n")
    else:
        rows = [list(solution_record(rank, sol).values()) for rank, sol in ranked]
        write_rows(out, args.format, SYNTH_COLUMNS, rows)
    if not result.solutions:
        err.write(prune_summary(result))
        return EXIT_EMPTY
    if not args.quiet:
        err.write(f"{result.feasible_count} feasible of {result.candidates_examined} "
                  f"candidates; showing {len(result.solutions)}\n")
    return EXIT_OK


def cmd_check(args, out, err) -> int:
    spec = _load(args)
    design = spec.design(args.zs, args.zp1, args.zp2, args.zf, args.zo)
    report = gm.validate(design, spec)
    rows = [[e.name, "pass" if e.satisfied else "FAIL", fmt_residual(e.residual), e.note or ""]
            for e in report]
    write_rows(out, args.format, CHECK_COLUMNS, rows)
    if not args.quiet and args.format == "table":
        alpha = gm.carrier_clearance(design)
        out.write(f"clearance {fmt_real(alpha)} rad ({fmt_real(math.degrees(alpha))} deg); "
                  f"{'feasible' if report.overall_feasible else 'infeasible'}\n")
    return EXIT_OK if report.overall_feasible else EXIT_CHECK


def _parse_values(parameter: str, raw: str) -> list:
    items = [v.strip() for v in raw.split(",")] if raw.strip() else []
    if not items or any(not v for v in items):
        raise SpecError("values must be non-empty")
    if parameter == "n_planets":
        try:
            return [int(v) for v in items]
        except ValueError:
            raise SpecError(f"n_planets values must be integers, got {raw!r}") from None
    return items


def cmd_sweep(args, out, err) -> int:
    spec = _load(args)
    values = _parse_values(args.param, args.values)
    rows = []
    for row in sweep(spec, args.param, values, workers=args.workers):
        best = row.best
        if not row.ok:
            status = "error"
        else:
            status = "ok" if best else "empty"
        teeth = list(best.design.teeth) if best else [""] * 5
        rows.append([args.param, row.value, status, row.feasible_count, *teeth,
                     fmt_real(best.cost) if best else "",
                     fmt_exact(best.ratio) if best else "",
                     row.error or ""])
    write_csv(out, SWEEP_COLUMNS, rows)
    return EXIT_OK


def _bundled(name: str):
    return resources.files("gearsynth") / "data" / name


def cmd_envelope(args, out, err) -> int:
    with ExitStack() as stack:
        path = args.fixture or _spec_path(args)
        if path is None:
            path = stack.enter_context(resources.as_file(_bundled("actuators.cfg")))
        specs = load_actuators(path)
    rows = [[s.name, s.gear_ratio,
             fmt_real(actuator.peak_output_torque(s)),
             fmt_real(actuator.motor_side_speed(s)),
             fmt_real(actuator.reflected_inertia(s))] for s in specs]
    write_rows(out, args.format, ENVELOPE_COLUMNS, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, default):
        p.add_argument("--format", choices=("table", "csv", "jsonl"), default=default,
                       help="output format (default: table)")
        p.add_argument("--spec", default=default, help="spec file path")
        p.add_argument("--quiet", action="store_true", default=default,
                       help="suppress informational messages")

    parser = argparse.ArgumentParser(
        prog="gearsynth",
        description="Tooth-count synthesis for 3K compound planetary gearboxes.",
        epilog=SPEC_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.set_defaults(format="table", spec=None, quiet=False)
    add_globals(parser, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def subcommand(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=SPEC_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        add_globals(p, argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    p = subcommand("synth", cmd_synth, "rank feasible tooth-count sets for a spec")
    p.add_argument("spec_file", nargs="?", help="spec file (or use --spec)")
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")

    p = subcommand("check", cmd_check, "validate one tooth-count set against a spec")
    p.add_argument("spec_file", nargs="?", help="spec file (or use --spec)")
    for flag, label in (("--zs", "sun"), ("--zp1", "input planet"), ("--zp2", "output planet"),
                        ("--zf", "fixed ring"), ("--zo", "output ring")):
        p.add_argument(flag, type=int, required=True, help=f"{label} tooth count")

    p = subcommand("sweep", cmd_sweep, "re-run synthesis over values of one parameter (CSV)")
    p.add_argument("spec_file", nargs="?", help="spec file (or use --spec)")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--workers", type=int, default=1)

    p = subcommand("envelope", cmd_envelope, "actuator output torque, speed and inertia")
    p.add_argument("fixture", nargs="?", help="actuator fixture (default: bundled D151/D110A)")
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for empty results here
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out, err)
    except SpecError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def run() -> None:
    sys.exit(main())


def run_captured(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run :func:`main` and return (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()
