"""Command-line interface.

Exit status: 0 on success, 1 on a numerical or domain failure (an error JSON
is written to standard error), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import math
import os
import sys
from typing import List, Optional

import numpy as np

from . import io
from .checks import run_all
from .errors import DimensionMismatch, InvalidParams, PathGroupError
from .geodesics import Line, geodesic_curve
from .group import DEFAULT_TOL, GroupPoint, reduce_to_origin
from .optimality import cut_info, cut_time, cut_time_at_point, in_cut_locus, phi0
from .symmetry import invariants_of
from .synthesis import synthesize, trajectory


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _t_grid(text: str) -> np.ndarray:
    try:
        start, stop, count = text.split(":")
        count = int(count)
        start, stop = float(start), float(stop)
    except ValueError:
        raise UsageError(f"--t-grid expects start:stop:count, got {text!r}")
    if count < 1:
        raise UsageError("--t-grid count must be at least 1")
    return np.linspace(start, stop, count)


def _floats(text: str, flag: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}")


def _json_arg(text: Optional[str], flag: str):
    """Inline JSON, a file path, or '-' for standard input."""
    if text is None:
        raise UsageError(f"{flag} is required")
    if text == "-":
        text = sys.stdin.read()
    elif not text.lstrip().startswith("{") and os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: invalid JSON ({exc.msg})")
    if not isinstance(value, dict):
        raise UsageError(f"{flag}: expected a JSON object")
    return value


def _point(args) -> GroupPoint:
    try:
        return io.point_from_dict(_json_arg(args.point, "--point"))
    except (DimensionMismatch, InvalidParams, TypeError) as exc:
        raise UsageError(f"--point: {exc}")


def _params(args):
    try:
        return io.params_from_dict(_json_arg(args.params, "--params"))
    except (DimensionMismatch, TypeError) as exc:
        raise UsageError(f"--params: {exc}")


def _csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- subcommands ---------------------------------------------------------------

def cmd_exp(args) -> str:
    g = _params(args)
    ts = _t_grid(args.t_grid) if args.t_grid else np.array([1.0])
    x, l, y = geodesic_curve(g, ts)
    points = [GroupPoint(xi, li, yi) for xi, li, yi in zip(x, l, y)]
    if args.format == "json":
        return io.dumps([dict(t=float(t), **io.point_to_dict(p)) for t, p in zip(ts, points)])
    return _csv_text(io.trajectory_header(g.n), io.trajectory_rows(ts, points))


def cmd_invariants(args) -> str:
    return io.dumps(io.invariants_to_dict(invariants_of(_point(args))))


def cmd_cut_time(args) -> str:
    g = _params(args)
    if args.format == "json":
        if isinstance(g, Line):
            return io.dumps({"t_cut": None, "is_conjugate_at_cut": False, "multiplicity": None})
        return io.dumps(io.cut_info_to_dict(cut_info(g)))
    return repr(cut_time(g))


def cmd_cut_locus_check(args) -> str:
    p = _point(args)
    inside = in_cut_locus(p, args.tol)
    inv = invariants_of(p)
    out = {"in_cut_locus": inside, "invariants": io.invariants_to_dict(inv)}
    if inv.l2 > 0 and inv.y2 > 0:
        out["phi0"] = phi0(inv.l_norm, inv.y_norm)
    out["t_cut"] = cut_time_at_point(p, args.tol) if inside else None
    return io.dumps(out)


def cmd_locus_slice(args) -> str:
    sigmas = _floats(args.sigmas, "--sigmas")
    if any(not s > 0 for s in sigmas):
        raise UsageError("--sigmas must be positive")
    ls = _t_grid(args.l_grid)
    rows = []
    for s in sigmas:
        c = 1.0 / (4.0 * math.pi * s * s)
        for L in ls:
            rows.append([io.fmt_csv(s), io.fmt_csv(L), io.fmt_csv(c * L * L),
                         io.fmt_csv(math.sqrt(1.0 + 4.0 * s * s) * c * L * L)])
    return _csv_text(["sigma", "l_norm", "y_min", "y_max"], rows)


def cmd_synth(args) -> str:
    target = _point(args)
    start = None
    if args.from_point is not None:
        try:
            start = io.point_from_dict(_json_arg(args.from_point, "--from"))
        except (DimensionMismatch, InvalidParams, TypeError) as exc:
            raise UsageError(f"--from: {exc}")
        if start.n != target.n:
            raise UsageError("--from and --point have different dimensions")
        result = synthesize(reduce_to_origin(start, target), args.tol)
    else:
        result = synthesize(target, args.tol)
    if args.emit_trajectory:
        ts_count = args.samples
        rows = []
        for i, (g, t) in enumerate(result.solutions):
            ts = np.linspace(0.0, t, ts_count)
            pts = trajectory(g, ts, start)
            for r in io.trajectory_rows(ts, pts):
                rows.append([str(i)] + r)
        header = ["solution"] + io.trajectory_header(target.n)
        with open(args.emit_trajectory, "w") as fh:
            fh.write(_csv_text(header, rows))
    return io.dumps(io.result_to_dict(result))


def cmd_verify(args) -> str:
    lines = []

    def report(r):
        lines.append(r.line())
        if args.progress:
            print(r.line(), file=sys.stderr, flush=True)

    results = run_all(args.seed, report)
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} passed")
    args._failed = bool(failed)
    if args.format == "json":
        return io.dumps([{"number": r.number, "name": r.name, "passed": r.passed,
                          "detail": r.detail, "seconds": r.seconds} for r in results])
    return "\n".join(lines)


# -- driver --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="numerical tolerance")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), help="output format")

    p = _Parser(prog="pathgroup",
                description="Optimal sub-Riemannian geodesics on path-geometry Carnot groups.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("exp", parents=[common], help="sample a geodesic from the identity")
    s.add_argument("--params", help="GeodesicParams JSON, a file, or '-'")
    s.add_argument("--t-grid", help="start:stop:count")
    s.set_defaults(func=cmd_exp, default_format="csv")

    s = sub.add_parser("invariants", parents=[common], help="SO(n) invariants of a point")
    s.add_argument("--point", help="GroupPoint JSON, a file, or '-'")
    s.set_defaults(func=cmd_invariants, default_format="json")

    s = sub.add_parser("cut-time", parents=[common], help="cut time of a geodesic")
    s.add_argument("--params", help="GeodesicParams JSON, a file, or '-'")
    s.set_defaults(func=cmd_cut_time, default_format="csv")

    s = sub.add_parser("cut-locus-check", parents=[common], help="cut-locus membership")
    s.add_argument("--point", help="GroupPoint JSON, a file, or '-'")
    s.set_defaults(func=cmd_cut_locus_check, default_format="json")

    s = sub.add_parser("locus-slice", parents=[common],
                       help="band of the cut locus in the plane x = 0 for fixed sigma")
    s.add_argument("--sigmas", default="0.25,0.5,1,2", help="comma-separated sigma values")
    s.add_argument("--l-grid", default="0:2:41", help="|l| grid start:stop:count")
    s.set_defaults(func=cmd_locus_slice, default_format="csv")

    s = sub.add_parser("synth", parents=[common], help="minimizing geodesics to a point")
    s.add_argument("--point", help="target GroupPoint JSON, a file, or '-'")
    s.add_argument("--from", dest="from_point", help="start GroupPoint (default: identity)")
    s.add_argument("--emit-trajectory", metavar="PATH", help="write sampled trajectories as CSV")
    s.add_argument("--samples", type=int, default=101, help="trajectory samples per solution")
    s.set_defaults(func=cmd_synth, default_format="json")

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suites")
    s.add_argument("--progress", action="store_true", help="report each suite as it finishes")
    s.set_defaults(func=cmd_verify, default_format="csv")
    return p


def _configure_logging():
    level = os.environ.get("PATHGROUP_LOG", "off").lower()
    levels = {"info": logging.INFO, "debug": logging.DEBUG}
    if level in levels:
        logging.basicConfig(stream=sys.stderr, level=levels[level],
                            format="%(levelname)s %(name)s: %(message)s")


def run(argv: Optional[List[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.format is None:
            args.format = args.default_format
        text = args.func(args)
    except UsageError as exc:
        print(f"pathgroup: error: {exc}", file=sys.stderr)
        return 2
    except (PathGroupError, ValueError, ArithmeticError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        diag = getattr(exc, "diagnostics", None)
        if diag:
            err["diagnostics"] = io._plain(diag)
        print(io.dumps(err), file=sys.stderr)
        return 1
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if getattr(args, "_failed", False) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
