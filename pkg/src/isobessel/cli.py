"""Command-line front end.

Every command writes CSV or JSON to stdout, or to ``--out``.  Exit status is
0 on success, 2 when an argument violates a precondition, and 3 when the
``residuals`` gate finds a case above tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import bessel_core, isospectral, verify, wavefield
from .bessel_core import RadialGrid
from .errors import ConfigurationError, DomainError, NumericalBlowUpError
from .isospectral import GammaParam, PartnerSpec

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_TOLERANCE = 3

FIGURE2_GAMMAS = ("0", "0.2", "1", "5", "inf")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _gamma(text: str) -> GammaParam:
    return GammaParam.parse(text)


def _radii(args, default_start: float = 0.0) -> np.ndarray:
    if args.r:
        return np.array(args.r, dtype=float)
    start = default_start if args.r_min is None else args.r_min
    if args.r_max is None or args.step is None:
        raise UsageError("give --r values or --r-max with --step")
    if args.step <= 0:
        raise DomainError("--step must be positive")
    return RadialGrid.arange(start, args.r_max, args.step).points


def _add_grid(p, what="r"):
    p.add_argument(f"--{what}", type=float, nargs="+", dest="r", help=f"explicit {what} values")
    p.add_argument(f"--{what}-min", type=float, dest="r_min")
    p.add_argument(f"--{what}-max", type=float, dest="r_max")
    p.add_argument("--step", type=float)


def _add_output(p, default="csv"):
    p.add_argument("--format", choices=("csv", "json"), default=default)
    p.add_argument("--out", help="output file (default: stdout)")


def _table(args, header, columns):
    if args.format == "json":
        return write_json({h: [float(v) for v in col] for h, col in zip(header, columns)})
    return write_csv(header, zip(*[[float(v) for v in col] for col in columns]))


def cmd_eval(args):
    r = _radii(args)
    funcs = {
        "j": bessel_core.bessel_j,
        "dj": bessel_core.bessel_j_derivative,
        "raise": bessel_core.ladder_raise,
        "lower": bessel_core.ladder_lower,
    }
    values = np.atleast_1d(funcs[args.quantity](args.n, r))
    return _table(args, ["r", f"{args.quantity}_{args.n}"], [r, values]), EXIT_OK


def cmd_partner(args):
    spec = PartnerSpec(args.n, _gamma(args.gamma))
    r = _radii(args)
    funcs = {
        "value": isospectral.partner_j,
        "d1": isospectral.partner_j_derivative,
        "d2": isospectral.partner_j_second_derivative,
    }
    values = np.atleast_1d(funcs[args.quantity](spec, r))
    name = f"partner{spec.index}" if args.quantity == "value" else f"partner{spec.index}_{args.quantity}"
    return _table(args, ["r", name], [r, values]), EXIT_OK


def cmd_g(args):
    u = _radii(args)
    values = np.atleast_1d(isospectral.damping_g(args.n, _gamma(args.gamma), u))
    return _table(args, ["u", f"g{args.n + 1}"], [u, values]), EXIT_OK


def cmd_zeros(args):
    spec = PartnerSpec(args.n, _gamma(args.gamma))
    zeros = isospectral.find_zeros(spec, args.r_max, args.max_count)
    if args.format == "json":
        return write_json({"n": spec.n, "gamma": str(spec.gamma), "zeros": zeros}), EXIT_OK
    return write_csv(["index", "r"], [(i + 1, z) for i, z in enumerate(zeros)]), EXIT_OK


def cmd_residuals(args):
    result = verify.run_suite(
        include_fd=(args.matrix == "full"),
        damping_scale=-1.0 if args.flip_damping_sign else 1.0,
    )
    payload = {"matrix": args.matrix, **result.as_dict()}
    if args.format == "csv":
        header = ["identity_id", "label", "n", "gamma", "k", "tolerance", "max_abs", "rms", "argmax_point", "passed"]
        rows = []
        for c in result.cases:
            rows.append(
                [c.identity.value, c.label, c.n, c.gamma or "", "" if c.k is None else fmt(c.k),
                 fmt(c.tolerance), fmt(c.report.max_abs), fmt(c.report.rms),
                 fmt(c.report.argmax_point), "true" if c.passed else "false"]
            )
        text = write_csv(header, rows)
    else:
        text = write_json(payload)
    return text, EXIT_OK if result.passed else EXIT_TOLERANCE


def figure2_table(which: int, gammas=FIGURE2_GAMMAS, r_max: float = 15.0, step: float = 0.01):
    """Columns ``r`` and one partner curve ``Jt_which(r; gamma)`` per gamma."""
    if which not in (2, 3):
        raise DomainError("--which must be 2 or 3")
    if not (0 < r_max <= bessel_core.MAX_RADIUS):
        raise DomainError(f"r_max must lie in (0, {bessel_core.MAX_RADIUS}]")
    r = RadialGrid.arange(0.0, r_max, step).points
    gammas = [GammaParam.parse(g) for g in gammas]
    columns = [isospectral.partner_j(PartnerSpec(which - 1, g), r) for g in gammas]
    header = ["r"] + [f"gamma={g}" for g in gammas]
    return header, r, columns


def cmd_figure2(args):
    gammas = args.gammas.split(",") if args.gammas else FIGURE2_GAMMAS
    header, r, columns = figure2_table(args.which, gammas, args.r_max, args.step)
    return _table(args, header, [r, *columns]), EXIT_OK


def _wave_params(args):
    return wavefield.WaveParams(args.n, _gamma(args.gamma), args.k, args.v, args.phase)


def cmd_field(args):
    params = _wave_params(args)
    grid = wavefield.PolarGrid.uniform(args.r_min, args.r_max, args.nr, args.ntheta)
    fld = wavefield.stationary_field(params, grid, args.t)
    if args.format == "json":
        return write_json(
            {"r": [float(x) for x in grid.r], "theta": [float(x) for x in grid.theta],
             "time": fld.time, "values": [[float(v) for v in row] for row in fld.values]}
        ), EXIT_OK
    return write_csv(["r", "theta", "value"], fld.rows()), EXIT_OK


def cmd_evolve(args):
    params = _wave_params(args)
    if args.r_max is None:
        grid = wavefield.annulus_grid(params, args.r_min, args.nr, args.ntheta, args.r_limit)
    else:
        grid = wavefield.PolarGrid.uniform(args.r_min, args.r_max, args.nr, args.ntheta)
    report = wavefield.time_evolve(params, grid, args.periods, args.steps_per_period)
    payload = {
        "n": params.n,
        "gamma": str(params.gamma),
        "k": params.k,
        "v": params.v,
        "r_min": float(grid.r[0]),
        "r_max": float(grid.r[-1]),
        "grid": list(grid.shape),
        "periods": args.periods,
        **report.as_dict(),
    }
    return write_json(payload), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isobessel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="Bessel J_n and ladder expressions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--quantity", choices=("j", "dj", "raise", "lower"), default="j")
    _add_grid(p)
    _add_output(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("partner", help="partner function Jt_{n+1}(r; gamma)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", required=True, help='number or "inf"')
    p.add_argument("--quantity", choices=("value", "d1", "d2"), default="value")
    _add_grid(p)
    _add_output(p)
    p.set_defaults(func=cmd_partner)

    p = sub.add_parser("g", help="damping coefficient g_{n+1}(u; gamma)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", required=True)
    _add_grid(p, "u")
    _add_output(p)
    p.set_defaults(func=cmd_g)

    p = sub.add_parser("zeros", help="positive zeros of the partner function")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--r-max", type=float, default=10.0)
    p.add_argument("--max-count", type=int)
    _add_output(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("residuals", help="identity residual suite (exit 3 on failure)")
    p.add_argument("--matrix", choices=("default", "full"), default="default")
    p.add_argument(
        "--flip-damping-sign",
        action="store_true",
        help="fault injection: use -g in the partner equations",
    )
    _add_output(p, default="json")
    p.set_defaults(func=cmd_residuals)

    p = sub.add_parser("figure2", help="partner curves across a gamma sweep")
    p.add_argument("--which", type=int, choices=(2, 3), required=True)
    p.add_argument("--gammas", help="comma separated, default 0,0.2,1,5,inf")
    p.add_argument("--r-max", type=float, default=15.0)
    p.add_argument("--step", type=float, default=0.01)
    _add_output(p)
    p.set_defaults(func=cmd_figure2)

    def wave_args(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--gamma", required=True)
        p.add_argument("--k", type=float, default=1.0)
        p.add_argument("--v", type=float, default=1.0)
        p.add_argument("--phase", type=float, default=0.0)
        p.add_argument("--r-min", type=float, default=0.2)
        p.add_argument("--nr", type=int, default=256)
        p.add_argument("--ntheta", type=int, default=64)

    p = sub.add_parser("field", help="standing-wave snapshot on a polar grid")
    wave_args(p)
    p.add_argument("--r-max", type=float, default=10.0)
    p.add_argument("--t", type=float, default=0.0)
    _add_output(p)
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("evolve", help="leapfrog stationarity run")
    wave_args(p)
    p.add_argument("--r-max", type=float, help="outer radius (default: last partner zero below --r-limit)")
    p.add_argument("--r-limit", type=float, default=10.0)
    p.add_argument("--periods", type=int, default=5)
    p.add_argument("--steps-per-period", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evolve, format="json")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, execute one command, return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, status = args.func(args)
    except (UsageError, DomainError, ConfigurationError) as exc:
        print(f"isobessel: error: {exc}", file=stderr)
        return EXIT_INVALID
    except NumericalBlowUpError as exc:
        print(f"isobessel: numerical failure: {exc}", file=stderr)
        return EXIT_TOLERANCE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    try:
        status = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
        status = EXIT_OK
    sys.exit(status)
