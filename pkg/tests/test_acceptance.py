"""Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines as
they are produced; they are also repeated in the terminal summary.
"""

from __future__ import annotations

import random
from collections import Counter

from branchdec.contraction import convert_decomposition
from branchdec.core import BranchDecError, decomposition_width, popcount, validate_decomposition
from branchdec.instances import Graph, carving_oracle, cut_rank_oracle, graph_branchwidth_oracle
from branchdec.matroid import (
    GF2Matroid,
    GraphicMatroid,
    LambdaOracle,
    UniformMatroid,
    lambda_min,
    matroid_branch_width,
    matroid_intersection,
)
from branchdec.polymatroid import titanic_test
from branchdec.sfm import Minimizer, minimize_constrained
from branchdec.solver import SolverConfig, SolverStats, exact_base, iterative_compression, search_min_width
from branchdec.split import SplitTrace, titanic_split
from branchdec.testkit import (
    INSTANCE_KINDS,
    brute_branch_width,
    brute_constrained_min,
    brute_titanic,
    dp_branch_width,
    random_cubic_graph,
    random_decomposition,
    random_gf2_matrix,
    random_instance,
)


def _reference_width(kind, seed, size):
    fresh = random_instance(seed, kind, size)
    return brute_branch_width(fresh)[0] if size <= 9 else dp_branch_width(fresh)


def _check_search(kind, seed, size, config, stats=None):
    """Problem description, or None if search, validation and re-evaluation
    all agree with the reference."""
    f = random_instance(seed, kind, size)
    k, dec = search_min_width(f, config, stats)
    ref = _reference_width(kind, seed, size)
    if k != ref:
        return f"{kind} seed={seed} n={size}: search {k} != reference {ref}"
    if size >= 2:
        problem = validate_decomposition(dec, size)
        if problem:
            return f"{kind} seed={seed} n={size}: {problem}"
        w = decomposition_width(random_instance(seed, kind, size), dec)
        if w != k:
            return f"{kind} seed={seed} n={size}: re-evaluated width {w} != {k}"
    return None


def test_criterion_1_exact_vs_brute(report):
    bad, total = [], 0
    for kind in INSTANCE_KINDS:
        for size in range(2, 9):
            for seed in range(6):
                total += 1
                problem = _check_search(kind, 100 * size + seed, size, SolverConfig())
                if problem:
                    bad.append(problem)
    ok = report(1, not bad and total >= 200, f"{total} instances, {len(bad)} mismatches {bad[:3]}")
    assert ok


def test_criterion_2_recursion_exercised(report):
    bad, total = [], 0
    exercised = Counter()
    per_kind = Counter()
    for kind in INSTANCE_KINDS:
        for size in range(7, 11):
            for seed in range(10):
                total += 1
                per_kind[kind] += 1
                stats = SolverStats()
                problem = _check_search(kind, 1000 * size + seed, size, SolverConfig(base_threshold=4, seed=seed), stats)
                if problem:
                    bad.append(problem)
                for key in ("split", "convert", "glue"):
                    if stats.counts[key]:
                        exercised[kind, key] += 1
    cover = ", ".join(
        f"{kind} split/convert/glue {exercised[kind, 'split']}/{exercised[kind, 'convert']}/"
        f"{exercised[kind, 'glue']} of {per_kind[kind]}" for kind in INSTANCE_KINDS)
    every_kind_glued = all(exercised[kind, "glue"] > 0 for kind in INSTANCE_KINDS)
    ok = report(2, not bad and total >= 200 and every_kind_glued,
                f"{total} instances, {len(bad)} mismatches {bad[:3]}; runs exercising the recursion: {cover}")
    assert ok


def test_criterion_3_titanic_equivalence(report):
    rng = random.Random(3)
    bad, total, negatives = [], 0, 0
    while total < 600:
        kind = rng.choice(INSTANCE_KINDS)
        n = rng.randint(3, 11)
        f = random_instance(rng.randrange(1 << 30), kind, n)
        a = rng.randrange(1, f.full)
        while popcount(a) > 10:
            a &= a - 1
        total += 1
        res = titanic_test(f, a)
        expected = brute_titanic(f, a) is None
        if res.titanic != expected:
            bad.append(f"{kind} n={n} A={a:#b}: got {res.titanic}")
        if not res.titanic:
            negatives += 1
            w = res.witness
            if not w.is_partition_of(a) or any(f(p) >= f(a) for p in w.parts):
                bad.append(f"{kind} n={n} A={a:#b}: bad witness {w}")
    ok = report(3, not bad, f"{total} (instance, A) pairs, {negatives} non-titanic, {len(bad)} disagreements {bad[:3]}")
    assert ok


def test_criterion_4_sfm_equivalence(report):
    rng = random.Random(4)
    bad, total = [], 0
    mnp = Minimizer("mnp")
    while total < 600:
        kind = rng.choice(INSTANCE_KINDS)
        n = rng.randint(2, 10 if kind == "table" else 12)
        f = random_instance(rng.randrange(1 << 30), kind, n)
        x = rng.getrandbits(n) & rng.getrandbits(n)
        y = rng.getrandbits(n) & rng.getrandbits(n) & ~x
        total += 1
        value, smallest = brute_constrained_min(f, x, y)
        res = minimize_constrained(f, x, y)
        if (res.value, res.minimizer) != (value, smallest):
            bad.append(f"{kind} n={n}: default route {res} vs {(value, smallest)}")
        res2 = minimize_constrained(f, x, y, mnp)
        if res2.value != value or f(res2.minimizer) != value:
            bad.append(f"{kind} n={n}: min-norm-point route {res2} vs {value}")
    s = mnp.stats
    ok = report(4, not bad, f"{total} queries on two routes, {len(bad)} mismatches {bad[:3]}; min-norm-point runs "
                            f"{s['mnp_runs']}, certified {s['mnp_certified']}, enumeration fallbacks {s['mnp_fallbacks']}")
    assert ok


def test_criterion_5_conversion(report):
    rng = random.Random(5)
    bad, runs, modes = [], 0, Counter()
    while runs < 250:
        kind = rng.choice(INSTANCE_KINDS)
        n = rng.randint(4, 10)
        seed = rng.randrange(1 << 30)
        f = random_instance(seed, kind, n)
        dec = random_decomposition(seed, n)
        a = rng.randrange(1, f.full)
        w = decomposition_width(f, dec)
        if brute_titanic(f, a) is not None:
            continue
        if brute_titanic(f, f.full ^ a) is None:
            mode = "both"
        elif f(a) <= w:
            mode = "small"
        else:
            continue
        runs += 1
        modes[mode] += 1
        try:
            conv = convert_decomposition(f, dec, a, mode)
        except BranchDecError as exc:
            bad.append(f"{kind} n={n} A={a:#b}: {exc}")
            continue
        if validate_decomposition(conv.dec, conv.oracle.n) or decomposition_width(conv.oracle, conv.dec) > w:
            bad.append(f"{kind} n={n} A={a:#b}: output invalid or wider")
    ok = report(5, not bad, f"{runs} conversions ({dict(modes)}), {len(bad)} failures {bad[:3]}")
    assert ok


def test_criterion_6_split(report):
    rng = random.Random(6)
    bad, runs, rounds = [], 0, Counter()
    while runs < 200:
        kind = rng.choice(INSTANCE_KINDS)
        n = rng.randint(3, 10)
        seed = rng.randrange(1 << 30)
        f = random_instance(seed, kind, n)
        dec = random_decomposition(seed, n)
        width = decomposition_width(f, dec)
        trace = SplitTrace()
        runs += 1
        try:
            cut = titanic_split(f, dec, width, trace)
        except BranchDecError as exc:
            bad.append(f"{kind} n={n}: {exc}")
            continue
        rounds[len(trace.values)] += 1
        small = min(popcount(cut.side), n - popcount(cut.side))
        if brute_titanic(f, cut.side) is not None or brute_titanic(f, f.full ^ cut.side) is not None:
            bad.append(f"{kind} n={n}: side not titanic")
        if small < n / 3 ** (width + 1):
            bad.append(f"{kind} n={n}: side size {small} below bound")
        if any(a <= b for a, b in zip(trace.values, trace.values[1:])):
            bad.append(f"{kind} n={n}: values {trace.values} not strictly decreasing")
    ok = report(6, not bad, f"{runs} splits, refinement rounds histogram {dict(sorted(rounds.items()))}, "
                            f"{len(bad)} failures {bad[:3]}")
    assert ok


def test_criterion_7_matroid_path(report):
    rng = random.Random(7)
    bad, certs, lam = [], 0, 0
    for _ in range(300):
        n = rng.randint(1, 12)
        m1 = GF2Matroid.from_rows(random_gf2_matrix(rng.randrange(1 << 30), rng.randint(1, 5), n))
        m2 = GF2Matroid.from_rows(random_gf2_matrix(rng.randrange(1 << 30), rng.randint(1, 5), n))
        try:
            i, u = matroid_intersection(m1, m2, m1.full)
        except BranchDecError as exc:
            bad.append(f"intersection: {exc}")
            continue
        certs += 1
        if popcount(i) != m1(u) + m2(m1.full ^ u):
            bad.append(f"certificate fails at n={n}")
        x = rng.getrandbits(n) & rng.getrandbits(n)
        y = rng.getrandbits(n) & rng.getrandbits(n) & ~x
        lam += 1
        if lambda_min(m1, x, y).value != brute_constrained_min(LambdaOracle(m1), x, y)[0]:
            bad.append(f"lambda_min differs at n={n}")
    u24 = exact_base(LambdaOracle(UniformMatroid(2, 4))).width
    tri = GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])
    tri_w = exact_base(LambdaOracle(tri)).width
    pinned = (u24 == 2 and tri_w == 1
              and matroid_branch_width(UniformMatroid(2, 4), 2).ok and matroid_branch_width(UniformMatroid(2, 4), 1).exceeded
              and matroid_branch_width(tri, 1).ok and matroid_branch_width(tri, 0).exceeded)
    ok = report(7, not bad and pinned, f"{certs} certificates, {lam} lambda queries, {len(bad)} failures {bad[:3]}; "
                                       f"U(2,4)={u24}, triangle={tri_w}, solver agrees={pinned}")
    assert ok


def test_criterion_8_pinned(report):
    cases = {
        "carving C4": (carving_oracle(Graph.cycle(4)), 2),
        "branch-width K4": (graph_branchwidth_oracle(Graph.complete(4)), 3),
        "rank-width C5": (cut_rank_oracle(Graph.cycle(5)), 2),
        "matroid U(2,4)": (LambdaOracle(UniformMatroid(2, 4)), 2),
    }
    got = {}
    for name, (f, pinned) in cases.items():
        exact = exact_base(f).width
        searched = search_min_width(f)[0]
        lowered = search_min_width(f, SolverConfig(base_threshold=4))[0]
        got[name] = (exact, searched, lowered, pinned)
    ok = report(8, all(len(set(v)) == 1 for v in got.values()),
                "; ".join(f"{k}: exact/search/search(n0=4)/pinned = {v}" for k, v in got.items()))
    assert ok


def test_criterion_9_cubic_scaling(report):
    calls, levels = {}, {}
    for n in (16, 32, 64):
        f = carving_oracle(random_cubic_graph(9, n))
        out = iterative_compression(f, 3, SolverConfig())
        calls[n] = f.queries
        levels[n] = out.level if out.exceeded else "accepted"
    ratios = [calls[32] / calls[16], calls[64] / calls[32]]
    ok = report(9, all(r <= 2 ** 8 for r in ratios),
                f"oracle calls {calls}, doubling ratios {[round(r, 2) for r in ratios]}, refusal level {levels}")
    assert ok
