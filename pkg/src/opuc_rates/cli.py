"""Command-line front end.

Each subcommand writes one table (CSV by default, JSON with ``--format
json``) to ``--out`` or stdout.  The first comment lines of every output
repeat the invocation.  Exit status: 2 for bad arguments, 3 for numerical
failures, 4 for I/O errors.
"""
from __future__ import annotations

import argparse
import os
import re
import shlex
import sys

import numpy as np

from . import io as tio
from .entropy import entropy_at, entropy_profile, fit_entropy_exponent
from .errors import NumericalError
from .experiments import (
    disk_grid, figure2_data, poisson_example_check, rate_experiment, theorem1_sweep,
)
from .kernels import KernelContext, deviation_matrix
from .measures import compute_moments, make_weight, parse_weight
from .opuc import levinson

PROG = "opuc-rates"
EXIT_PARSE, EXIT_NUMERIC, EXIT_IO = 2, 3, 4

_PI = re.compile(r"^\s*([-+]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?)\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$")


def parse_angle(text):
    """Radians from ``'0.7'``, ``'0.2pi'``, ``'pi/5'`` or ``'-pi'``."""
    m = _PI.match(text)
    if m is None:
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None
    coef, den = m.group(1), m.group(2)
    if coef in ("+", "-"):
        coef += "1"
    value = (float(coef) if coef else 1.0) * np.pi
    return value / int(den) if den else value


def parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    common.add_argument("--tol", type=float, default=1e-12, help="moment tolerance")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    def weight_arg(sp, required=True):
        sp.add_argument("--weight", required=required,
                        help="lebesgue | poisson:LAM | holder:S | file:PATH")

    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("moments", parents=[common], help="trigonometric moments")
    weight_arg(sp)
    sp.add_argument("--n", type=int, required=True, help="number of moments")

    sp = sub.add_parser("verblunsky", parents=[common], help="Verblunsky coefficients")
    weight_arg(sp, required=False)
    sp.add_argument("--n", type=int, help="number of moments used")
    sp.add_argument("--verblunsky-csv", help="re-export previously computed coefficients")

    sp = sub.add_parser("kernel-ratio", parents=[common], help="kernel ratio deviation grid")
    weight_arg(sp, required=False)
    sp.add_argument("--verblunsky-csv", help="use these coefficients instead of --weight")
    sp.add_argument("--n", type=int, required=True, help="kernel dimension")
    sp.add_argument("--zeta", type=parse_angle, default=0.0, help="angle of zeta")
    sp.add_argument("--z1", type=parse_complex, action="append")
    sp.add_argument("--z2", type=parse_complex, action="append")
    sp.add_argument("--A", type=float, default=1.0, help="grid radius A/n when no points given")
    sp.add_argument("--radii", type=int, default=5)
    sp.add_argument("--angles", type=int, default=8)
    sp.add_argument("--strategy", choices=("sum", "cd"), default="sum")

    sp = sub.add_parser("entropy", parents=[common], help="entropy at points of the disk")
    weight_arg(sp)
    sp.add_argument("--z", type=parse_complex, action="append", required=True)

    sp = sub.add_parser("entropy-fit", parents=[common], help="radial entropy profile and fits")
    weight_arg(sp)
    sp.add_argument("--zeta", type=parse_angle, default=0.0)
    sp.add_argument("--gap-min", type=float, default=1e-4)
    sp.add_argument("--gap-max", type=float, default=1e-1)
    sp.add_argument("--points", type=int, default=25)

    sp = sub.add_parser("rate", parents=[common], help="deviation rate table")
    weight_arg(sp)
    sp.add_argument("--N", type=int, default=2000)
    sp.add_argument("--step", type=int, default=20)
    sp.add_argument("--convention", choices=("dimension", "script"), default="dimension")

    sp = sub.add_parser("figure2", parents=[common], help="f1 = D(n) against C n^-s")
    sp.add_argument("--s", type=float, required=True)
    weight_arg(sp, required=False)
    sp.add_argument("--N", type=int, default=2000)
    sp.add_argument("--step", type=int, default=20)
    sp.add_argument("--convention", choices=("dimension", "script"), default="dimension")
    sp.add_argument("--plot", help="also write an SVG plot here")

    sp = sub.add_parser("poisson-check", parents=[common], help="n sup|delta_n| for Poisson")
    sp.add_argument("--lam", type=parse_complex, default=0.5)
    sp.add_argument("--n", type=parse_int_list, default=[100, 200, 400, 800])
    sp.add_argument("--radii", type=int, default=5)
    sp.add_argument("--angles", type=int, default=8)

    sp = sub.add_parser("theorem1", parents=[common], help="deviation against entropy bound")
    weight_arg(sp)
    sp.add_argument("--zeta", type=parse_angle, default=0.0)
    sp.add_argument("--A", type=float, default=1.0)
    sp.add_argument("--n", type=parse_int_list, required=True)
    sp.add_argument("--radii", type=int, default=17)
    sp.add_argument("--angles", type=int, default=32)
    return p


class _Output:
    def __init__(self, args, header):
        self.args = args
        self.header = header

    def table(self, writer, obj, *extra):
        if self.args.format == "json":
            text = tio.dumps(obj, self.header)
        elif self.args.format == "svg":
            raise ValueError(f"--format svg is only available for figure2")
        else:
            text = tio.table_text(writer, *extra, comments=self.header) if extra else \
                tio.table_text(writer, obj, comments=self.header)
        tio.emit(self.args.out or sys.stdout, text)


def _verblunsky_source(args, n):
    if getattr(args, "verblunsky_csv", None):
        return tio.read_verblunsky(args.verblunsky_csv), None
    if not args.weight:
        raise ValueError("either --weight or --verblunsky-csv is required")
    w = parse_weight(args.weight)
    return levinson(compute_moments(w, n, args.tol)), w


def run(args, header):
    out = _Output(args, header)
    cmd = args.command
    if cmd == "moments":
        m = compute_moments(parse_weight(args.weight), args.n, args.tol)
        out.table(tio.write_moments, m)
    elif cmd == "verblunsky":
        if not args.verblunsky_csv and args.n is None:
            raise ValueError("--n is required with --weight")
        v, _ = _verblunsky_source(args, args.n)
        out.table(tio.write_verblunsky, v)
    elif cmd == "kernel-ratio":
        v, _ = _verblunsky_source(args, args.n)
        ctx = KernelContext(v.truncated(args.n - 1), args.n, args.strategy)
        zeta = np.exp(1j * args.zeta)
        if args.z1:
            z1 = np.asarray(args.z1)
            z2 = np.asarray(args.z2 or args.z1)
            if z2.size not in (1, z1.size):
                raise ValueError("--z2 must be given once or as often as --z1")
            z1, z2 = np.broadcast_arrays(z1, z2)
            ratio, universal = deviation_matrix(ctx, zeta, z1, z2)
            idx = np.arange(z1.size)
            ratio, universal = ratio[idx, idx], universal[idx, idx]
        else:
            pts = disk_grid(zeta, args.A / args.n, args.radii + 1, args.angles)
            ratio, universal = deviation_matrix(ctx, zeta, pts, pts)
            z1, z2 = np.meshgrid(pts, pts, indexing="ij")
        result = {"n": args.n, "z1": z1.ravel(), "z2": z2.ravel(), "ratio": ratio.ravel(),
                  "universal": universal.ravel(),
                  "deviation": np.abs(ratio - universal).ravel()}
        out.table(tio.write_deviations, result, args.n, z1, z2, ratio, universal)
    elif cmd == "entropy":
        w = parse_weight(args.weight)
        zs = np.asarray(args.z)
        vals = np.array([entropy_at(w, z) for z in zs])
        result = [{"z": z, "K": k} for z, k in zip(zs, vals)]
        rows = [(z.real, z.imag, k) for z, k in zip(zs, vals)]
        out.table(lambda fh, r, comments: tio.write_table(fh, ("re_z", "im_z", "K"), r, comments),
                  result, rows)
    elif cmd == "entropy-fit":
        w = parse_weight(args.weight)
        gaps = np.geomspace(args.gap_max, args.gap_min, args.points)
        prof = entropy_profile(w, np.exp(1j * args.zeta), gaps, threads=args.threads)
        for model in ("plain", "log-corrected"):
            fit_entropy_exponent(prof, model)
        out.table(tio.write_entropy_profile, prof)
    elif cmd == "rate":
        recs = rate_experiment(parse_weight(args.weight), args.N, args.step, args.tol,
                               args.convention)
        out.table(tio.write_rate, recs)
    elif cmd == "figure2":
        w = parse_weight(args.weight) if args.weight else None
        table = figure2_data(args.s, args.N, args.step, w, args.tol, convention=args.convention)
        if args.format == "svg" or args.plot:
            from .plotting import figure2_svg

            target = args.plot or args.out
            if target is None:
                raise ValueError("--format svg needs --out or --plot")
            figure2_svg(table, target, header)
        if args.format != "svg":
            out.table(tio.write_figure2, table)
        if table.tail_holds is False:
            print(f"{PROG}: warning: f1 < f2 somewhere on the tail", file=sys.stderr)
    elif cmd == "poisson-check":
        out.table(tio.write_poisson, poisson_example_check(args.lam, args.n, args.radii,
                                                           args.angles, tol=args.tol))
    elif cmd == "theorem1":
        reports = theorem1_sweep(parse_weight(args.weight), np.exp(1j * args.zeta), args.A,
                                 args.n, radii=args.radii, angles=args.angles, tol=args.tol)
        out.table(tio.write_theorem1, reports)
    return 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad syntax
    header = [shlex.join([PROG] + argv)]
    try:
        return run(args, header)
    except NumericalError as exc:
        print(f"{PROG}: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        # reader went away (e.g. piped into head); stay quiet like other tools
        sys.stderr.close()
        return 0
    except OSError as exc:
        print(f"{PROG}: I/O error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"{PROG}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
