"""Command-line interface.

Exit codes: 0 verified output, 2 no-map-detected (named invariant
failure), 3 resource limit.
"""

import argparse
import os
import sys

from . import groebner
from .errors import BranchmapError
from .field import FieldCtx
from .mpoly import format_poly
from .pipeline import (forward_generate, load_curve, load_map, preimage_count,
                       reconstruct, save_curve, save_map, verify_branching)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="branchmap",
        description="Reconstruct planar maps P2 -> P2 from branching curves "
                    "over a prime field, and generate/verify test instances.")
    sub = ap.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("reconstruct", help="reconstruct a map from a curve")
    rec.add_argument("--input", required=True, help="curve manifest file")
    rec.add_argument("--degree", type=int, required=True,
                     help="polynomial degree d of the sought map")
    rec.add_argument("--seed", type=int, default=0)
    rec.add_argument("--gb-max-pairs", type=int, default=groebner.DEFAULT_MAX_PAIRS)
    rec.add_argument("--gb-max-degree", type=int, default=None)
    rec.add_argument("--max-point-tries", type=int, default=200)
    rec.add_argument("--samples-factor", type=int, default=2)
    rec.add_argument("--output", default=None, help="write emitted maps here")

    fwd = sub.add_parser("forward", help="generate a random generic instance")
    fwd.add_argument("--degree", type=int, required=True)
    fwd.add_argument("--seed", type=int, default=0)
    fwd.add_argument("--prime", type=int, default=32003)
    fwd.add_argument("--output", required=True, help="output directory")

    ver = sub.add_parser("verify", help="check the branching identity")
    ver.add_argument("--map", required=True, dest="map_path")
    ver.add_argument("--curve", required=True)

    nrm = sub.add_parser("normalize", help="linear normalization of a curve")
    nrm.add_argument("--input", required=True)
    nrm.add_argument("--seed", type=int, default=0)
    nrm.add_argument("--output", default=None)

    pre = sub.add_parser("preimages", help="fiber of a map over a point")
    pre.add_argument("--map", required=True, dest="map_path")
    pre.add_argument("--point", required=True, help="comma-separated coordinates")
    pre.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except BranchmapError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3 if exc.kind == "resource" else 2


def _dispatch(args):
    if args.command == "reconstruct":
        curve, _header = load_curve(args.input)
        groebner.DEFAULT_MAX_PAIRS = args.gb_max_pairs
        report = reconstruct(curve, args.degree, seed=args.seed,
                             max_point_tries=args.max_point_tries,
                             samples_factor=args.samples_factor)
        for line in report.lines():
            print(line)
        print(report.machine_block())
        if report.ok and args.output:
            save_map(args.output, report.maps[0], d=args.degree)
        for pm in report.maps:
            for i, f in enumerate(pm.forms):
                print(f"F{i} = {format_poly(f)}")
        return report.exit_code()

    if args.command == "forward":
        pm, r, b = forward_generate(args.degree, seed=args.seed,
                                    ctx=FieldCtx(args.prime))
        os.makedirs(args.output, exist_ok=True)
        save_map(os.path.join(args.output, "map.txt"), pm, d=args.degree)
        save_curve(os.path.join(args.output, "ramification.txt"), r,
                   d=args.degree, name="R")
        save_curve(os.path.join(args.output, "curve.txt"), b,
                   d=args.degree, name="B")
        print(f"wrote map.txt, ramification.txt, curve.txt to {args.output}")
        print(f"deg R = {r.degree}, deg B = {b.degree}")
        return 0

    if args.command == "verify":
        pm, _ = load_map(args.map_path)
        curve, _ = load_curve(args.curve)
        ok = verify_branching(pm, curve)
        print("verified" if ok else "branching identity FAILS")
        return 0 if ok else 2

    if args.command == "normalize":
        from .curves import singular_radical
        from .linnorm import adjoint_element, linear_normalization
        curve, _ = load_curve(args.input)
        sing = singular_radical(curve, seed=args.seed)
        g, deg_g = adjoint_element(curve, sing, seed=args.seed)
        pc = linear_normalization(curve, sing, g=g)
        lines = [f"N={pc.ambient_dim}", f"D={pc.form_degree}"]
        lines += [format_poly(f) for f in pc.forms]
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            print(text, end="")
        return 0

    if args.command == "preimages":
        pm, _ = load_map(args.map_path)
        q = tuple(int(t) for t in args.point.split(","))
        rational, total = preimage_count(pm, q, seed=args.seed)
        print(f"rational_preimages={rational}")
        print(f"fiber_degree={total}")
        return 0

    raise AssertionError(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
