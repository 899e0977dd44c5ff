"""Command-line interface: ``branchdec decompose`` and ``branchdec verify``.

Decomposition files are ASCII text::

    d branchdec <n> <nodes>
    t <a> <b>          one per tree edge, nodes numbered depth-first
    l <node> <element> one per leaf, elements 0-based
    w <width>

Exit codes: 0 success, 2 width above the requested bound, 3 input or
validation error, 4 internal invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .contraction import MergedOracle
from .core import (
    BranchDecError,
    BranchDecomposition,
    InvariantError,
    UsageError,
    ValidationError,
    canonical_form,
    decomposition_width,
    validate_decomposition,
)
from .instances import KINDS, load_instance
from .sfm import UnresolvedMinimization
from .solver import SolverConfig, SolverStats, iterative_compression, search_min_width

EXIT_OK, EXIT_WIDTH, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3, 4


def format_decomposition(dec: BranchDecomposition | None, n: int, width: int) -> str:
    if dec is None:
        return f"d branchdec {n} 0\nw {width}\n"
    c = canonical_form(dec)
    lines = [f"d branchdec {n} {len(c.adj)}"]
    edges = sorted(((min(u, v), max(u, v)) for u, v in c.edges()), key=lambda e: e[1])
    lines += [f"t {a} {b}" for a, b in edges]
    lines += [f"l {node} {e}" for node, e in sorted(c.labels.items())]
    lines.append(f"w {width}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> tuple[BranchDecomposition | None, int, int | None]:
    """Returns (decomposition or None for n <= 1, n, declared width)."""
    dec = BranchDecomposition({}, {})
    n = nodes = width = None
    for no, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok:
            continue
        head = 2 if tok[0] == "d" else 1
        if tok[0] == "d" and tok[1:2] != ["branchdec"]:
            raise ValidationError(f"line {no}: expected 'd branchdec <n> <nodes>'")
        try:
            nums = [int(t) for t in tok[head:]]
        except ValueError:
            raise ValidationError(f"line {no}: non-integer field") from None
        if tok[0] == "d" and len(nums) == 2:
            if n is not None:
                raise ValidationError(f"line {no}: second header")
            n, nodes = nums
        elif tok[0] == "t" and len(nums) == 2:
            dec.add_edge(*nums)
        elif tok[0] == "l" and len(nums) == 2:
            if nums[0] in dec.labels:
                raise ValidationError(f"line {no}: node {nums[0]} labelled twice")
            dec.labels[nums[0]] = nums[1]
        elif tok[0] == "w" and len(nums) == 1:
            width = nums[0]
        else:
            raise ValidationError(f"line {no}: unrecognised line {raw!r}")
    if n is None:
        raise ValidationError("missing 'd branchdec' header")
    for node in dec.labels:
        dec.adj.setdefault(node, [])
    if nodes == 0 and not dec.adj:
        return None, n, width
    if len(dec.adj) != nodes:
        raise ValidationError(f"header announces {nodes} nodes, found {len(dec.adj)}")
    return dec, n, width


def _config(args) -> SolverConfig:
    return SolverConfig(base_threshold=args.base_threshold, sfm=args.sfm, seed=args.seed,
                        debug=not args.no_debug, matroid_fast_path=not args.no_matroid_fast_path)


def _print_stats(f, stats: SolverStats, out) -> None:
    base = f.base if isinstance(f, MergedOracle) else f
    print(f"oracle_calls={base.queries}", file=out)
    print(f"peak_cache_size={len(base.cache)}", file=out)
    matroid = getattr(base, "matroid", None)
    if matroid is not None:
        print(f"rank_calls={matroid.queries}", file=out)
    for key in ("levels", "compress", "split", "split_degenerate", "convert", "glue", "exact_base"):
        print(f"{key}={stats.counts.get(key, 0)}", file=out)


def cmd_decompose(args) -> int:
    f = load_instance(args.kind, args.input)
    config = _config(args)
    stats = SolverStats()
    if args.search:
        width, dec = search_min_width(f, config, stats)
    else:
        out = iterative_compression(f, args.k, config, stats)
        if out.exceeded:
            print(f"branch-width > {args.k}")
            if args.stats:
                _print_stats(f, stats, sys.stdout)
            return EXIT_WIDTH
        width, dec = out.width, out.decomposition
    text = format_decomposition(dec, f.n, width)
    print(f"width={width}")
    if args.stats:
        _print_stats(f, stats, sys.stdout)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    f = load_instance(args.kind, args.input)
    dec, n, declared = parse_decomposition(Path(args.decomposition).read_text())
    if n != f.n:
        print(f"decomposition is over {n} elements, instance has {f.n}")
        return EXIT_INPUT
    if dec is None:
        if n > 1:
            print("missing tree for a ground set with more than one element")
            return EXIT_INPUT
        width = 0
    else:
        problem = validate_decomposition(dec, n)
        if problem:
            print(f"invalid decomposition: {problem}")
            return EXIT_INPUT
        width = decomposition_width(f, dec)
    print(f"width={width}")
    if declared is not None and declared != width:
        print(f"declared width {declared} differs from recomputed width {width}")
        return EXIT_INPUT
    if args.k is not None and width > args.k:
        print(f"branch-width of this decomposition > {args.k}")
        return EXIT_WIDTH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="branchdec", description="Branch-decompositions of connectivity functions")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="find a decomposition of width <= k, or of minimum width")
    d.add_argument("--kind", choices=KINDS, required=True)
    d.add_argument("--input", required=True)
    mode = d.add_mutually_exclusive_group(required=True)
    mode.add_argument("--k", type=int)
    mode.add_argument("--search", action="store_true")
    d.add_argument("--output")
    d.add_argument("--base-threshold", type=int, default=8)
    d.add_argument("--sfm", choices=("enumerate", "mnp", "auto"), default="auto")
    d.add_argument("--seed", type=int)
    d.add_argument("--stats", action="store_true")
    d.add_argument("--no-debug", action="store_true", help="skip width re-evaluation of intermediate results")
    d.add_argument("--no-matroid-fast-path", action="store_true")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="recompute the width of a decomposition file")
    v.add_argument("--kind", choices=KINDS, required=True)
    v.add_argument("--input", required=True)
    v.add_argument("--decomposition", required=True)
    v.add_argument("--k", type=int)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvariantError, UnresolvedMinimization) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValidationError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BranchDecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
