"""Command-line front end.

Subcommands surface the library: point evaluation, grid scans, stationary
point verification, density tables, kissing numbers, degeneration checks and
the four-curve dataset behind the zeta landscape.  Tables are emitted as CSV
(17 significant digits, lossless round-trip) or JSON lines; report paths can
additionally render a figure next to the delimited output via --plot.

Exit codes: 0 success, 1 usage or validation error, 2 verification failure,
3 unattainable tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from .analysis import (
    argmin_scan,
    default_scan_tol,
    density_table,
    scan_zeta,
    verify_bcc_minimum,
)
from .lattice import ONE_THIRD, classify, kissing_number, packing_density
from .limits import verify_A_to_inf, verify_A_to_zero, verify_s_to_inf
from .zeta import (
    DivergenceError,
    SumSpec,
    UnattainableToleranceError,
    epstein_zeta,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_UNATTAINABLE = 3

FIGURE_EXPONENTS = (3.0, 6.0, 20.0)
FIGURE_STEPS = 41  # A = 1/3 + k/60 for k = 0..40


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_real(text: str) -> float:
    """Parse a real number or an exact fraction string like 1/3.

    Fractions are reduced exactly before the single conversion to float, so
    boundary values such as 1/3 land inside the boundary detection window.
    """
    text = text.strip()
    if "/" in text:
        try:
            return float(Fraction(text))
        except ZeroDivisionError as exc:
            raise ValueError(f"zero denominator in {text!r}") from exc
    return float(text)


def _format_cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _emit(header, rows, fmt: str, out_path: str | None) -> None:
    buf = io.StringIO()
    if fmt == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(x) for x in row])
    else:
        for row in rows:
            buf.write(json.dumps(dict(zip(header, row))) + "\n")
    text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spec_from(args) -> SumSpec:
    if getattr(args, "cutoff", None) is not None:
        return SumSpec(cutoff=args.cutoff)
    tol = getattr(args, "tol", None)
    return SumSpec(target_tol=tol if tol is not None else 1e-8)


def _cmd_eval(args) -> int:
    param = classify(args.A)
    z = epstein_zeta(param, args.s, _spec_from(args))
    _emit(
        ["A", "s", "value", "tail_bound", "cutoff"],
        [(args.A, args.s, z.value, z.tail_bound, z.cutoff_used)],
        args.format,
        args.out,
    )
    return EXIT_OK


def _cmd_scan(args) -> int:
    table = scan_zeta(args.s, args.min, args.max, args.steps, args.tol)
    rows = [(r.a, args.s, r.value, r.tail_bound, r.cutoff) for r in table.rows]
    _emit(["A", "s", "value", "tail_bound", "cutoff"], rows, args.format, args.out)
    if args.plot:
        from . import plotting

        plotting.save_scan_plot(table, args.plot)
    return EXIT_OK


def _cmd_verify(args) -> int:
    report = verify_bcc_minimum(
        args.s,
        tol_first=args.tol_first,
        tol_second_rel=args.tol_second_rel,
        cutoff=args.cutoff,
    )
    header = [
        "s",
        "cutoff",
        "first_deriv_analytic",
        "first_deriv_symmetrized",
        "first_deriv_fd",
        "second_deriv_analytic",
        "second_deriv_fd",
        "passed",
    ]
    _emit(
        header,
        [
            (
                report.s,
                report.cutoff,
                report.first_deriv_analytic,
                report.first_deriv_symmetrized,
                report.first_deriv_fd,
                report.second_deriv_analytic,
                report.second_deriv_fd,
                report.passed,
            )
        ],
        args.format,
        args.out,
    )
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def _cmd_density(args) -> int:
    if args.A is not None:
        rows = [(args.A, packing_density(classify(args.A)))]
    else:
        rows = density_table(args.min, args.max, args.steps)
    _emit(["A", "density"], rows, args.format, args.out)
    if args.plot:
        from . import plotting

        plotting.save_density_plot(rows, args.plot)
    return EXIT_OK


def _cmd_kissing(args) -> int:
    count = kissing_number(classify(args.A), tol=args.tol)
    sys.stdout.write(f"{count}\n")
    return EXIT_OK


def _cmd_argmin(args) -> int:
    loc = argmin_scan(args.s, args.min, args.max, args.steps, cutoff=args.cutoff)
    _emit(
        ["s", "A_star", "value", "at_boundary", "cutoff"],
        [(args.s, loc.a_star, loc.value, loc.at_boundary, loc.cutoff)],
        args.format,
        args.out,
    )
    return EXIT_OK


def _cmd_limits(args) -> int:
    if args.direction == "a-to-inf":
        report = verify_A_to_inf(args.s, args.probes or (4.0, 16.0, 64.0))
    elif args.direction == "a-to-zero":
        report = verify_A_to_zero(args.A if args.A is not None else 0.1)
    else:
        report = verify_s_to_inf(args.A if args.A is not None else 0.5, args.probes or (10.0, 20.0, 50.0))
    rows = [
        (report.direction, p, d, report.threshold, report.converged)
        for p, d in zip(report.probes, report.deviations)
    ]
    _emit(["direction", "probe", "deviation", "threshold", "converged"], rows, args.format, args.out)
    return EXIT_OK if report.converged else EXIT_VERIFY_FAILED


def _cmd_figure2(args) -> int:
    grid = [ONE_THIRD + k / 60.0 for k in range(FIGURE_STEPS)]
    header = ["A", "s", "value", "tail_bound", "cutoff"]
    rows = []
    curves = {}
    for s in FIGURE_EXPONENTS:
        tol = args.tol if args.tol is not None else default_scan_tol(s)
        spec = SumSpec(target_tol=tol)
        curve = []
        for a in grid:
            z = epstein_zeta(classify(a), s, spec)
            rows.append((a, s, z.value, z.tail_bound, z.cutoff_used))
            curve.append((a, z.value))
        curves[s] = curve
    kiss_rows = []
    for a in grid:
        count = kissing_number(classify(a))
        rows.append((a, math.inf, float(count), 0.0, 0))
        kiss_rows.append((a, float(count)))
    _emit(header, rows, args.format, args.out)
    if args.plot:
        from . import plotting

        plotting.save_family_plot(curves, kiss_rows, args.plot)
    return EXIT_OK


def _add_output_flags(p) -> None:
    p.add_argument("--out", default=None, help="write the table to this path instead of stdout")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv", help="table format")


def _add_tol_cutoff(p) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--tol", type=float, default=None, help="absolute truncation budget")
    group.add_argument("--cutoff", type=int, default=None, help="explicit summation cutoff N")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="cuboidal",
        description="Lattice sums and packing invariants of the cuboidal lattice family.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one zeta value with its tail bound")
    p.add_argument("--A", type=parse_real, required=True, help="anisotropy parameter (real or fraction like 1/2)")
    p.add_argument("--s", type=float, required=True, help="exponent, must exceed 3/2")
    _add_tol_cutoff(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("scan", help="zeta values on a uniform A-grid")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--min", type=parse_real, default=ONE_THIRD)
    p.add_argument("--max", type=parse_real, default=1.0)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--plot", default=None, help="also render the curve to this image path")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("verify", help="check the derivative conditions at A = 1/2")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--tol-first", type=float, default=1e-5)
    p.add_argument("--tol-second-rel", type=float, default=0.01)
    p.add_argument("--cutoff", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("density", help="packing density point or table")
    p.add_argument("--A", type=parse_real, default=None)
    p.add_argument("--min", type=parse_real, default=0.05)
    p.add_argument("--max", type=parse_real, default=2.0)
    p.add_argument("--steps", type=int, default=79)
    p.add_argument("--plot", default=None)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("kissing", help="kissing number at A")
    p.add_argument("--A", type=parse_real, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_kissing)

    p = sub.add_parser("argmin", help="locate the minimizing A on a grid")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--min", type=parse_real, default=ONE_THIRD)
    p.add_argument("--max", type=parse_real, default=1.0)
    p.add_argument("--steps", type=int, default=33)
    p.add_argument("--cutoff", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_argmin)

    p = sub.add_parser("limits", help="degeneration checks")
    p.add_argument("--direction", choices=("a-to-inf", "a-to-zero", "s-to-inf"), required=True)
    p.add_argument("--A", type=parse_real, default=None)
    p.add_argument("--s", type=float, default=6.0)
    p.add_argument("--probes", type=lambda t: tuple(float(x) for x in t.split(",")), default=None)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_limits)

    p = sub.add_parser("figure2", help="four-curve dataset: s = 3, 6, 20 plus the kissing-number row")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--plot", default=None)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_figure2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DivergenceError as exc:
        sys.stderr.write(f"cuboidal {args.command}: invalid --s: {exc}\n")
        return EXIT_USAGE
    except UnattainableToleranceError as exc:
        sys.stderr.write(f"cuboidal {args.command}: {exc}\n")
        return EXIT_UNATTAINABLE
    except ValueError as exc:
        sys.stderr.write(f"cuboidal {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
