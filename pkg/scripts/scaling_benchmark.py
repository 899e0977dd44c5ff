"""Oracle-call counts as the ground set doubles.

Two series are logged: carving-width of random cubic graphs at k=3 (always
refused, since every simple cubic graph on four or more vertices has
carving-width at least 4) and carving-width of cycles at k=2 (always
accepted). Output is one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import time

from branchdec.instances import Graph, carving_oracle
from branchdec.solver import SolverConfig, SolverStats, iterative_compression
from branchdec.testkit import random_cubic_graph


def run(series: str, n: int, seed: int, sfm_threshold: int) -> dict:
    if series == "cubic":
        f, k = carving_oracle(random_cubic_graph(seed, n)), 3
    else:
        f, k = carving_oracle(Graph.cycle(n)), 2
    stats = SolverStats()
    t0 = time.perf_counter()
    out = iterative_compression(f, k, SolverConfig(sfm_threshold=sfm_threshold), stats)
    return {
        "series": series, "n": n, "k": k, "seed": seed,
        "verdict": "accepted" if out.ok else f"> {k} at prefix {out.level}",
        "oracle_calls": f.queries, "seconds": round(time.perf_counter() - t0, 3),
        **{key: stats.counts.get(key, 0) for key in ("levels", "split", "split_degenerate", "glue", "exact_base")},
    }


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64])
    p.add_argument("--series", choices=("cubic", "cycle", "both"), default="both")
    p.add_argument("--seed", type=int, default=9)
    p.add_argument("--sfm-threshold", type=int, default=12)
    args = p.parse_args(argv)
    names = ("cubic", "cycle") if args.series == "both" else (args.series,)
    for series in names:
        prev = None
        for n in args.sizes:
            row = run(series, n, args.seed, args.sfm_threshold)
            if prev:
                row["ratio"] = round(row["oracle_calls"] / max(1, prev), 2)
            prev = row["oracle_calls"]
            print(json.dumps(row), flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
