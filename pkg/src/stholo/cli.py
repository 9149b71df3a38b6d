"""Command-line interface: ``stholo <command> [options]``.

Exit codes: 0 success, 2 invalid arguments, 3 runtime error. Pole hits
while sampling are reported in the data and do not change the exit code.
Negative option values need the ``=`` form, e.g. ``--C=-1,0``.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import List, Optional

from . import __version__
from .closed_form import (LatticeKind, Window, enumerate_lattice, eval_v, eval_v_prime,
                          residue_at_pole)
from .core import SolutionParams, Tolerances, classify_regime
from .export import build_document, fmt, to_csv, to_json, write_text
from .pressure import PressureSpecError, resolve_law
from .quadrature import IntegrationError, OdeProblem, integrate_path
from .sampler import GridSpec, sample_grid, sample_point, space_slice, time_slice
from .verifier import verify_grid

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 2, 3


class UsageError(ValueError):
    pass


def parse_complex(text: str) -> complex:
    """``re,im`` (or a single real) to complex."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected 're,im', got {text!r}")


def parse_range(text: str) -> List[float]:
    """``start:stop:n`` to ``n`` evenly spaced values (inclusive)."""
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"expected 'start:stop:n', got {text!r}") from None
    if n < 1:
        raise UsageError("n must be positive")
    if n == 1:
        return [a]
    return [a + (b - a) * k / (n - 1) for k in range(n)]


def parse_path(text: str) -> List[complex]:
    return [parse_complex(p) for p in text.split(";")]


def _params(args) -> SolutionParams:
    return SolutionParams(parse_complex(args.C), parse_complex(args.C2))


def _tol(args) -> Tolerances:
    return Tolerances(pole_tol=args.pole_tol, guard=args.guard, volume_guard=args.volume_guard)


def _emit(args, text: str) -> None:
    write_text(text, args.out)


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_eval(args) -> None:
    params, tol = _params(args), _tol(args)
    s = sample_point(params, args.t, args.x, tol)
    if args.format == "json":
        dv, _ = eval_v_prime(complex(args.x, args.t), params, tol)
        summary = {"v_z": None if s.v is None else [dv.real, dv.imag]}
        _emit(args, to_json(build_document(params, classify_regime(params), None, [s], summary)))
    else:
        _emit(args, to_csv([s]))


def cmd_sample(args) -> None:
    params, tol = _params(args), _tol(args)
    grid = GridSpec.parse(args.grid)
    samples = sample_grid(params, grid, tol)
    if args.format == "json":
        counts = {}
        for s in samples:
            counts[s.status.value] = counts.get(s.status.value, 0) + 1
        summary = {"n_samples": len(samples), "status_counts": dict(sorted(counts.items()))}
        _emit(args, to_json(build_document(params, classify_regime(params), grid, samples, summary)))
    else:
        _emit(args, to_csv(samples))


def cmd_slice(args) -> None:
    params, tol = _params(args), _tol(args)
    values = parse_range(args.values)
    if args.axis == "time":
        samples = time_slice(params, args.at, values, tol)
        desc = {"axis": "time", "x": args.at, "t_values": args.values}
    else:
        samples = space_slice(params, args.at, values, tol)
        desc = {"axis": "space", "t": args.at, "x_values": args.values}
    if args.format == "json":
        poles = [[s.t, s.x] for s in samples if s.status.value == "pole"]
        _emit(args, to_json(build_document(params, classify_regime(params), desc, samples, {"poles": poles})))
    else:
        _emit(args, to_csv(samples))


def cmd_lattice(args) -> None:
    params = _params(args)
    try:
        re_part, im_part = args.window.split(",")
        r0, r1 = (float(a) for a in re_part.split(":"))
        i0, i1 = (float(a) for a in im_part.split(":"))
        window = Window(r0, r1, i0, i1)
    except ValueError as exc:
        raise UsageError(f"bad window {args.window!r}: {exc}") from None
    points = enumerate_lattice(params, window)
    rows = []
    for p in points:
        res = residue_at_pole(p, params) if p.kind is LatticeKind.POLE else None
        rows.append((p, res))
    if args.format == "json":
        objs = [{"kind": p.kind.value, "k": p.index, "location": [p.location.real, p.location.imag],
                 "residue": None if r is None else [r.real, r.imag]} for p, r in rows]
        grid = {"re_min": r0, "re_max": r1, "im_min": i0, "im_max": i1}
        summary = {"n_zeros": sum(p.kind is LatticeKind.ZERO for p in points),
                   "n_poles": sum(p.kind is LatticeKind.POLE for p in points)}
        _emit(args, to_json(build_document(params, classify_regime(params), grid, objs, summary)))
    else:
        header = ("kind", "k", "re", "im", "residue_re", "residue_im")
        _emit(args, _rows_csv(header, [
            (p.kind.value, p.index, fmt(p.location.real), fmt(p.location.imag),
             "" if r is None else fmt(r.real), "" if r is None else fmt(r.imag)) for p, r in rows]))


def cmd_classify(args) -> None:
    params = _params(args)
    regime = classify_regime(params)
    if args.format == "json":
        _emit(args, to_json(build_document(params, regime, None, [],
                                           {"first_blowup_time": regime.first_blowup_time})))
    else:
        t = "" if regime.first_blowup_time is None else fmt(regime.first_blowup_time)
        _emit(args, _rows_csv(("regime", "first_blowup_time"), [(regime.tag.value, t)]))


def cmd_verify(args) -> None:
    params, tol = _params(args), _tol(args)
    grid = GridSpec.parse(args.grid)
    law = resolve_law(args.law)
    reports, summary = verify_grid(params, law, grid, args.h, tol)
    if args.format == "json":
        _emit(args, to_json(build_document(params, classify_regime(params), grid, reports, summary.as_dict())))
    else:
        _emit(args, to_csv(reports, kind="reports"))


def cmd_integrate(args) -> None:
    params, tol = _params(args), _tol(args)
    law = resolve_law(args.law)
    path = parse_path(args.path)
    C_int = parse_complex(args.C_int)
    if args.v0 is not None:
        v0 = parse_complex(args.v0)
    else:
        v0, status = eval_v(path[0], params, tol)
        if status.is_singular:
            raise UsageError("path starts on a pole of the closed-form solution; pass --v0")
    traj = integrate_path(OdeProblem(law, C_int, v0, tuple(path)), args.tol, args.abs_tol, tol)
    if args.format == "json":
        objs = [{"z": [z.real, z.imag], "v": [v.real, v.imag]} for z, v in traj.nodes]
        summary = {"law": law.name, "accepted": traj.accepted, "rejected": traj.rejected,
                   "min_step": traj.min_step if math.isfinite(traj.min_step) else None}
        _emit(args, to_json(build_document(params, classify_regime(params), None, objs, summary)))
    else:
        _emit(args, _rows_csv(("z_re", "z_im", "v_re", "v_im"),
                              [(fmt(z.real), fmt(z.imag), fmt(v.real), fmt(v.imag)) for z, v in traj.nodes]))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--C", default="0,0", help="shift constant as re,im (default 0,0)")
    common.add_argument("--C2", default="0,0", help="velocity offset as re,im (default 0,0)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--pole-tol", type=float, default=1e-12)
    common.add_argument("--guard", type=float, default=1e-3)
    common.add_argument("--volume-guard", type=float, default=1e-3)

    parser = argparse.ArgumentParser(prog="stholo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate v, u at one (t, x)")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", parents=[common], help="sample v, u on a (t, x) grid")
    p.add_argument("--grid", required=True, help="tmin:tmax:nt,xmin:xmax:nx")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("slice", parents=[common], help="time slice (fixed x) or space slice (fixed t)")
    p.add_argument("--axis", choices=("time", "space"), required=True)
    p.add_argument("--at", type=float, required=True, help="fixed x (time slice) or t (space slice)")
    p.add_argument("--values", required=True, help="start:stop:n for the varying coordinate")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("lattice", parents=[common], help="zeros and poles of v in a window")
    p.add_argument("--window", required=True, help="re_min:re_max,im_min:im_max")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("classify", parents=[common], help="regime report for C")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="finite-difference residual suite")
    p.add_argument("--grid", required=True, help="tmin:tmax:nt,xmin:xmax:nx")
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--law", default="inv_v", help="built-in name or rational function of v")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("integrate", parents=[common], help="integrate the reduced ODE along a polyline")
    p.add_argument("--law", default="inv_v", help="built-in name or rational function of v")
    p.add_argument("--path", required=True, help="waypoints 're,im;re,im;...'")
    p.add_argument("--v0", default=None, help="initial v as re,im (default: closed form at path start)")
    p.add_argument("--C-int", dest="C_int", default="0,0", help="first-integral constant as re,im")
    p.add_argument("--tol", type=float, default=1e-10, help="relative tolerance")
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_integrate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, PressureSpecError) as exc:
        print(f"stholo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, OSError, ArithmeticError) as exc:
        print(f"stholo: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"stholo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
