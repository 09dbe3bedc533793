"""Command-line entry point.

Exit codes: 0 success (witness found, coloring proper, certificate holds),
1 negative outcome (no witness, improper coloring, failed certificate),
2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .borsuk_ulam import find_zero_on_circle, find_zero_on_sphere, random_linear_map, random_trig_map
from .core import KneserInstance, canonical_coloring, exact_chromatic_number, random_coloring, verify_coloring
from .errors import KneserError
from .formats import WitnessReport, emit_coloring_file, emit_witness_report, parse_coloring_file
from .geometry import general_position_check, max_points_on_spanned_hyperplane, moment_curve_config
from .witness import SearchParams, geometric_witness_search, hybrid_witness


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise KneserError(f"cannot read {path}: {exc}") from None


def cmd_gen(args) -> int:
    inst = KneserInstance(args.n, args.k)
    if args.scheme == "canonical":
        coloring = canonical_coloring(inst)
    else:
        colors = args.colors if args.colors is not None else inst.d
        coloring = random_coloring(inst, colors, args.seed)
    text = emit_coloring_file(coloring)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    coloring = parse_coloring_file(_read(args.input))
    witness = verify_coloring(coloring)
    if witness is None:
        sys.stdout.write("proper\n")
        return 0
    sys.stdout.write("improper\n")
    sys.stdout.write(emit_witness_report(WitnessReport.from_witness(witness, seed=0)))
    return 1


def cmd_witness(args) -> int:
    coloring = parse_coloring_file(_read(args.input))
    inst = coloring.instance
    params = SearchParams(
        grid_size=args.grid,
        max_rounds=args.rounds,
        gap_tol=args.tol,
        seed=args.seed,
        workers=args.threads,
    )
    start = time.perf_counter()
    if args.method == "brute":
        witness = verify_coloring(coloring)
    else:
        config = moment_curve_config(inst.n, inst.d)
        if args.method == "hybrid":
            witness = hybrid_witness(inst, config, coloring, params)
        else:
            witness = geometric_witness_search(inst, config, coloring, params)
    elapsed = None if args.no_timing else round((time.perf_counter() - start) * 1000, 3)
    if witness is None:
        sys.stdout.write(_dump({"witness": None, "method": args.method, "seed": args.seed}))
        return 1
    sys.stdout.write(emit_witness_report(WitnessReport.from_witness(witness, args.seed, elapsed)))
    return 0


def cmd_chromatic(args) -> int:
    sys.stdout.write(f"{exact_chromatic_number(KneserInstance(args.n, args.k), args.cap)}\n")
    return 0


def cmd_lemma(args) -> int:
    rng = np.random.default_rng(args.seed)
    make = random_linear_map if args.systems == "random-linear" else random_trig_map
    f = make(args.d, rng)
    if args.d == 2:
        result = find_zero_on_circle(f, args.tol)
        method = "circle"
    else:
        result = find_zero_on_sphere(f, args.tol, args.starts, args.seed, workers=args.threads)
        method = "sphere"
    out = {"d": args.d, "systems": args.systems, "seed": args.seed, "method": method}
    if result is None:
        out["found"] = False
        sys.stdout.write(_dump(out))
        return 1
    out.update(
        found=True,
        direction=result.direction.coords.tolist(),
        residual=result.residual,
        calls_used=result.calls_used,
    )
    sys.stdout.write(_dump(out))
    return 0


def cmd_genpos(args) -> int:
    inst = KneserInstance(args.n, args.k)
    config = moment_curve_config(inst.n, inst.d)
    general = general_position_check(config)
    most = max_points_on_spanned_hyperplane(config)
    capacity = inst.n - 2 * inst.k + 2
    sys.stdout.write(
        _dump(
            {
                "n": inst.n,
                "k": inst.k,
                "d": inst.d,
                "general_position": general,
                "max_points_on_spanned_hyperplane": most,
                "contradiction_threshold": capacity,
            }
        )
    )
    return 0 if general and most < capacity else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kneser-geo", description="Geometric witnesses for the Kneser theorem."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    threads = os.cpu_count() or 1

    p = sub.add_parser("gen", help="write a coloring file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--scheme", choices=["canonical", "random"], default="canonical")
    p.add_argument("--colors", type=int, help="colors for --scheme random (default n-2k+1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a coloring for disjoint same-colored pairs")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="find a disjoint same-colored pair")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--method", choices=["geometric", "brute", "hybrid"], default="hybrid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--rounds", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--threads", type=int, default=threads)
    p.add_argument("--no-timing", action="store_true", help="omit elapsed_ms from the report")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("chromatic", help="exact chromatic number of KG(n,k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cap", type=int, default=40)
    p.set_defaults(func=cmd_chromatic)

    p = sub.add_parser("lemma", help="zero search on a random odd map")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--systems", choices=["random-linear", "random-trig"], default="random-linear")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--threads", type=int, default=threads)
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("genpos", help="exact general-position certificate for the moment curve")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_genpos)
    return parser


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (KneserError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())
