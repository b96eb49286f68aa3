"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 degenerate geometry, 3 convergence
failure (extrapolation residual above ``--tol``, or a sweep/oracle mismatch).
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .commutator import FOUR_PI, default_eps_sequence, evaluate_commutators
from .crossings import signed_crossings
from .errors import (
    DeformationFailed,
    DegenerateIncidence,
    EpsTooLarge,
    LoopsTouch,
    PointOnSurface,
    SceneError,
)
from .extrapolation import richardson
from .flux import flux_jump_table
from .geom import deform_interior, perturb_loop
from .linkoracle import gauss_linking
from .scenes import dumps, load_scene

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_CONVERGENCE = 0, 1, 2, 3


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _signed(n: int) -> str:
    return f"{n:+d}" if n else "0"


def _thread_cap() -> int:
    raw = os.environ.get("FLUXCOMM_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _scene_objects(args):
    scene = load_scene(args.scene)
    surface = scene.surface(args.surface)
    loop = scene.loop(args.loop)
    if getattr(args, "perturb", None) is not None:
        loop = perturb_loop(loop, args.perturb)
    return surface, loop


def cmd_crossings(args) -> int:
    surface, loop = _scene_objects(args)
    crossings, total = signed_crossings(surface, loop)
    for k, c in enumerate(crossings):
        x, y, z = (float(v) for v in c.point)
        print(f"crossing {k}: t={c.loop_arc_parameter:.12f} triangle={c.triangle_index} "
              f"sign={c.sign:+d} point=({x:.12g}, {y:.12g}, {z:.12g})")
    print(f"total = {_signed(total)}")
    return EXIT_OK


def cmd_commutator(args) -> int:
    surface, loop = _scene_objects(args)
    if args.eps is None:
        eps = default_eps_sequence(loop, signed_crossings(surface, loop)[0])
    else:
        eps = args.eps
    report = evaluate_commutators(surface, loop, eps)
    if args.csv:
        arcs = max(report.n_crossings, 1)
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["eps", "transverse_value", "arc_count"])
            for e, v in report.transverse_extrapolation:
                writer.writerow([format(e, ".17g"), format(v, ".17g"), arcs])
    payload = report.to_dict()
    payload["symbolic"] = {
        "superconductor": f"[Phi_E, Phi_B] = {report.superconductor_units_ihc:.17g} i hbar c",
        "vacuum": f"[Phi_E, Phi_B]_V = {report.vacuum_units_ihc:.17g} i hbar c",
        "charge_flux": f"[Phi, Q] = {report.charge_flux_units_ihc:.17g} i hbar c",
    }
    print(dumps(payload))
    if report.extrapolation_error > args.tol:
        print(f"extrapolation residual {report.extrapolation_error:.3g} exceeds tol {args.tol:g}",
              file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_sweep(args) -> int:
    scene = load_scene(args.scene)
    surface = scene.surface(args.surface)
    loop = scene.loop(args.loop)
    reference = signed_crossings(surface, loop)[1]

    def one(seed):
        try:
            deformed = deform_interior(surface, seed, args.amplitude, [loop])
        except DeformationFailed:
            return "failed"
        try:
            return signed_crossings(deformed, loop)[1]
        except DegenerateIncidence:
            return "degenerate"

    seeds = range(args.seed_offset, args.seed_offset + args.seeds)
    with ThreadPoolExecutor(max_workers=_thread_cap()) as pool:
        results = list(pool.map(one, seeds))
    counts = Counter(r for r in results if isinstance(r, int))
    for total in sorted(counts):
        print(f"{counts[total]}/{args.seeds} totals = {_signed(total)}")
    failed = sum(r == "failed" for r in results)
    degenerate = sum(r == "degenerate" for r in results)
    if failed:
        print(f"{failed}/{args.seeds} deformations failed")
    if degenerate:
        print(f"{degenerate}/{args.seeds} deformed scenes were degenerate")
    print(f"undeformed total = {_signed(reference)}")
    return EXIT_OK if set(counts) <= {reference} else EXIT_CONVERGENCE


def cmd_fluxjump(args) -> int:
    surface, loop = _scene_objects(args)
    crossings = signed_crossings(surface, loop)[0]
    if not crossings:
        raise SceneError("the loop does not cross the surface")
    if not 0 <= args.crossing < len(crossings):
        raise SceneError(f"crossing index {args.crossing} out of range (have {len(crossings)})")
    rows = flux_jump_table(surface, crossings[args.crossing], args.q, args.h)
    extrap = richardson([r.h for r in rows], [r.jump for r in rows])
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["h", "phi_below", "phi_above", "jump"])
            for r in rows:
                writer.writerow([format(v, ".17g") for v in (r.h, r.phi_below, r.phi_above, r.jump)])
    print(f"{'h':>12} {'phi_below':>20} {'phi_above':>20} {'jump':>20}")
    for r in rows:
        print(f"{r.h:12.6g} {r.phi_below:20.12f} {r.phi_above:20.12f} {r.jump:20.12f}")
    expected = -FOUR_PI * args.q
    print(f"extrapolated = {extrap.value:.12f}")
    print(f"expected -4*pi*q = {expected:.12f}")
    scale = abs(expected) if args.q else 1.0
    if len(rows) > 1 and extrap.error > args.tol * scale:
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_linking(args) -> int:
    scene = load_scene(args.scene)
    if args.loop_a and args.loop_b:
        a, b = scene.loop(args.loop_a), scene.loop(args.loop_b)
        print(f"linking = {gauss_linking(a, b, args.quad_order):.12f}")
        return EXIT_OK
    surface, loop = _scene_objects(args)
    value = gauss_linking(surface.boundary, loop, args.quad_order)
    total = signed_crossings(surface, loop)[1]
    print(f"linking = {value:.12f}")
    print(f"crossing total = {_signed(total)}")
    agree = round(value) == total and abs(value - total) < 1e-3
    print("agree" if agree else "DISAGREE")
    return EXIT_OK if agree else EXIT_CONVERGENCE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fluxcomm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def scene_args(p, perturb=True):
        p.add_argument("scene", help="scene JSON file")
        p.add_argument("--surface", default=None, help="surface name (default: first)")
        p.add_argument("--loop", default=None, help="loop name (default: first)")
        if perturb:
            p.add_argument("--perturb", type=int, default=None, metavar="SEED",
                           help="apply a tiny seeded rigid motion to the loop")

    p = sub.add_parser("crossings", help="signed crossings of a loop through a surface")
    scene_args(p)
    p.set_defaults(func=cmd_crossings)

    p = sub.add_parser("commutator", help="commutator report as JSON")
    scene_args(p)
    p.add_argument("--eps", type=_float_list, default=None,
                   help="excision half-widths in arclength units, e.g. 0.2,0.1,0.05,0.025")
    p.add_argument("--csv", default=None, help="write the convergence table here")
    p.add_argument("--tol", type=float, default=1e-3, help="max extrapolation residual")
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("sweep", help="crossing totals over random boundary-fixed deformations")
    scene_args(p, perturb=False)
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--seed-offset", type=int, default=0)
    p.add_argument("--amplitude", type=float, default=0.5)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fluxjump", help="flux change of a point charge stepping through the surface")
    scene_args(p)
    p.add_argument("--crossing", type=int, default=0, help="index into the sorted crossings")
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--h", type=_float_list, default=[0.2, 0.1, 0.05, 0.025])
    p.add_argument("--csv", default=None)
    p.add_argument("--tol", type=float, default=1e-3, help="max relative extrapolation residual")
    p.set_defaults(func=cmd_fluxjump)

    p = sub.add_parser("linking", help="Gauss linking integral (independent oracle)")
    scene_args(p)
    p.add_argument("--loop-a", default=None)
    p.add_argument("--loop-b", default=None)
    p.add_argument("--quad-order", type=int, default=4)
    p.set_defaults(func=cmd_linking)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (DegenerateIncidence, PointOnSurface, LoopsTouch) as exc:
        print(f"degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (SceneError, EpsTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
