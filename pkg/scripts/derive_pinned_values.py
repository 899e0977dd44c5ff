"""Derive the pinned regression widths by exhaustive search, then confirm
them with the compression solver and the independent subset DP."""

from __future__ import annotations

from branchdec.instances import Graph, carving_oracle, cut_rank_oracle, graph_branchwidth_oracle
from branchdec.matroid import GraphicMatroid, LambdaOracle, UniformMatroid
from branchdec.solver import SolverConfig, exact_base, search_min_width
from branchdec.testkit import dp_branch_width

CASES = {
    "carving-width C4": lambda: carving_oracle(Graph.cycle(4)),
    "branch-width K4": lambda: graph_branchwidth_oracle(Graph.complete(4)),
    "rank-width C5": lambda: cut_rank_oracle(Graph.cycle(5)),
    "matroid branch-width U(2,4)": lambda: LambdaOracle(UniformMatroid(2, 4)),
    "matroid branch-width triangle": lambda: LambdaOracle(GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])),
}


def main() -> int:
    status = 0
    for name, make in CASES.items():
        exact = exact_base(make(), prune=False)
        search = search_min_width(make(), SolverConfig(base_threshold=4))[0]
        dp = dp_branch_width(make())
        agree = exact.width == search == dp
        status |= not agree
        print(f"{name}: exact={exact.width} over {exact.trees} trees, search={search}, dp={dp}"
              f"{'' if agree else '  MISMATCH'}")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
