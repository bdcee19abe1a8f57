"""Command-line front end.

    gncs state        --lambda 0.5 --r 2 --z-abs 2
    gncs squeeze      --lambda 0 --r 4 --phi 0 --zsq-max 16 --steps 64
    gncs verify --quick

Tables go to stdout (or ``--output``) as CSV with 17 significant digits, or
as JSON with ``--format json``.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from .algebra import AlgebraParams
from .errors import GncsError
from .measure import T_MAX, T_MIN
from .observables import SWEEP_COLUMNS, SweepGrid, sweep
from .states import GncsSpec, build_state, overlap, overlap_closed, overlap_closed_mixed
from .verify import fmt

_PI_EXPR = re.compile(r"^\s*(-?[\d.]*)\s*\*?\s*pi\s*(?:/\s*([\d.]+))?\s*$")


def angle(text: str) -> float:
    """Float, or a multiple of pi such as ``pi/6``, ``2pi/3``, ``-pi``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_EXPR.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r} (use a number or e.g. pi/6)")
    coef = m.group(1)
    num = -1.0 if coef == "-" else float(coef) if coef else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gncs", description="su(1,1) generalized nonlinear coherent states")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, multi=False):
        if multi:
            p.add_argument("--lambda", dest="lam", type=float, nargs="+", required=True)
            p.add_argument("--r", type=int, nargs="+", required=True)
        else:
            p.add_argument("--lambda", dest="lam", type=float, required=True)
            p.add_argument("--r", type=int, required=True)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("state", help="Fock amplitudes of one state")
    common(p)
    p.add_argument("--z-abs", type=float, required=True)
    p.add_argument("--z-phase", type=angle, default=0.0)
    p.add_argument("--tolerance", type=float, default=1e-14)
    p.set_defaults(format="json")

    p = sub.add_parser("overlap", help="<z1|z2> by direct sum and closed form")
    common(p)
    p.add_argument("--r2", type=int, help="deformation of the second state (default: same r)")
    p.add_argument("--z-abs", type=float, required=True)
    p.add_argument("--z-phase", type=angle, default=0.0)
    p.add_argument("--z2-abs", type=float)
    p.add_argument("--z2-phase", type=angle)
    p.set_defaults(format="json")

    p = sub.add_parser("wavefunction", help="<x|z> on a grid (columns x, re, im, abs2)")
    common(p)
    p.add_argument("--z-abs", type=float, required=True)
    p.add_argument("--z-phase", type=angle, default=0.0)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--steps", type=_positive_int, default=200)

    p = sub.add_parser("measure", help="resolution-of-identity weight on [1e-3, 25]")
    common(p, multi=True)
    p.add_argument("--t-min", type=float, default=T_MIN)
    p.add_argument("--t-max", type=float, default=T_MAX)
    p.add_argument("--steps", type=_positive_int, default=250)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("squeeze", help="quadrature variances and squeezing factors")
    common(p, multi=True)
    p.add_argument("--phi", type=angle, nargs="+", default=[0.0])
    p.add_argument("--zsq-max", type=float, required=True)
    p.add_argument("--steps", type=_positive_int, default=64)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("stats", help="<N>, <N^2>, g2 and Mandel Q")
    common(p, multi=True)
    p.add_argument("--zsq-max", type=float, required=True)
    p.add_argument("--steps", type=_positive_int, default=80)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--quick", action="store_true", help="skip the slower extra cross-checks")
    p.add_argument("-o", "--output")
    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    """Re-check parameter invariants so mistakes surface as usage errors."""
    if args.command == "verify":
        return
    lams = args.lam if isinstance(args.lam, list) else [args.lam]
    rs = args.r if isinstance(args.r, list) else [args.r]
    if getattr(args, "r2", None) is not None:
        rs = rs + [args.r2]
    try:
        for lam in lams:
            for r in rs:
                AlgebraParams(lam, r)
        if args.command in ("state", "overlap", "wavefunction"):
            for r in rs:
                GncsSpec.make(lams[0], r, args.z_abs, args.z_phase)
                if getattr(args, "z2_abs", None) is not None:
                    GncsSpec.make(lams[0], r, args.z2_abs, args.z2_phase or 0.0)
    except GncsError as exc:
        parser.error(str(exc))
    if args.command in ("squeeze", "stats"):
        if not args.zsq_max > 0:
            parser.error("--zsq-max must be positive")
        if 1 in rs and args.zsq_max >= 1:
            parser.error("r = 1 states need |z|^2 < 1; lower --zsq-max")
    if args.command == "measure":
        if 1 in rs:
            parser.error("the weight is defined for r >= 2 (r = 1 lives on the unit disk)")
        if not T_MIN <= args.t_min < args.t_max <= T_MAX:
            parser.error(f"need {T_MIN} <= --t-min < --t-max <= {T_MAX}")
    if args.command == "wavefunction" and not args.x_max > 0:
        parser.error("--x-max must be positive")


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render_table(columns, rows, form: str) -> str:
    if form == "json":
        data = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(data, indent=1) + "\n"
    lines = [",".join(columns)] + [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _zsq_grid(args) -> tuple[float, ...]:
    return tuple(args.zsq_max * k / args.steps for k in range(1, args.steps + 1))


def run(args) -> tuple[str, int]:
    """Execute a parsed command; returns (text, exit status)."""
    cmd = args.command
    if cmd == "verify":
        import io

        from .verify import report, run_all

        buf = io.StringIO()
        results = run_all(quick=args.quick, out=buf)
        report(results, buf)
        return buf.getvalue(), 0 if all(r.passed for r in results) else 1

    if cmd == "state":
        s = build_state(GncsSpec.make(args.lam, args.r, args.z_abs, args.z_phase), args.tolerance)
        if args.format == "json":
            return json.dumps(s.to_json(), indent=1) + "\n", 0
        rows = [[n, float(c.real), float(c.imag)] for n, c in enumerate(s.amplitudes)]
        return render_table(("n", "re", "im"), rows, "csv"), 0

    if cmd == "overlap":
        r2 = args.r2 if args.r2 is not None else args.r
        z2_abs = args.z2_abs if args.z2_abs is not None else args.z_abs
        z2_phase = args.z2_phase if args.z2_phase is not None else args.z_phase
        s1 = GncsSpec.make(args.lam, args.r, args.z_abs, args.z_phase)
        s2 = GncsSpec.make(args.lam, r2, z2_abs, z2_phase)
        direct = overlap(build_state(s1), build_state(s2))
        if args.r == r2:
            closed = overlap_closed(s1, s2)
        elif args.z_abs == z2_abs and args.z_phase == z2_phase:
            closed = complex(overlap_closed_mixed(args.lam, args.r, r2, args.z_abs))
        else:
            closed = None
        out = {"lambda": args.lam, "r1": args.r, "r2": r2, "direct": [direct.real, direct.imag],
               "closed": None if closed is None else [closed.real, closed.imag]}
        if args.format == "csv":
            row = [args.lam, args.r, r2, direct.real, direct.imag,
                   math.nan if closed is None else closed.real, math.nan if closed is None else closed.imag]
            return render_table(("lambda", "r1", "r2", "direct_re", "direct_im", "closed_re", "closed_im"), [row], "csv"), 0
        return json.dumps(out, indent=1) + "\n", 0

    if cmd == "wavefunction":
        from .position import gncs_wavefunction

        xs = np.array([args.x_max * k / args.steps for k in range(1, args.steps + 1)])
        vals = gncs_wavefunction(GncsSpec.make(args.lam, args.r, args.z_abs, args.z_phase), xs)
        rows = [[float(x), float(v.real), float(v.imag), float(abs(v) ** 2)] for x, v in zip(xs, vals)]
        return render_table(("x", "re", "im", "abs2"), rows, args.format), 0

    if cmd == "measure":
        ts = tuple(float(t) for t in np.linspace(args.t_min, args.t_max, args.steps + 1))
        grid = SweepGrid(tuple(args.lam), tuple(args.r), ts=ts)
    elif cmd == "squeeze":
        grid = SweepGrid(tuple(args.lam), tuple(args.r), tuple(args.phi), _zsq_grid(args))
    else:
        grid = SweepGrid(tuple(args.lam), tuple(args.r), zsq=_zsq_grid(args))
    rows = sweep(grid, cmd, workers=args.workers)
    status = 0 if cmd == "measure" or all(row[-1] == "" for row in rows) else 2
    return render_table(SWEEP_COLUMNS[cmd], rows, args.format), status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        text, status = run(args)
    except GncsError as exc:
        print(f"gncs {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "output", None):
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
