"""Brute-force references and seeded instance generators.

Everything here is exhaustive and intentionally simple; it exists to check
the solver, not to be fast.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from .core import (
    BranchDecomposition,
    ConnectivityOracle,
    Tripartition,
    UsageError,
    attach_leaf,
    members,
    popcount,
    trivial_decomposition,
)
from .instances import Graph, TableOracle, carving_oracle, cut_rank_oracle, graph_branchwidth_oracle
from .matroid import GF2Matroid, LambdaOracle


def rooted_trees(labels):
    """All rooted binary trees (nested pairs) on ``labels``, built by
    inserting each label above every existing node in turn."""
    labels = list(labels)
    if not labels:
        return
    trees = [labels[0]]
    for x in labels[1:]:
        nxt = []
        for t in trees:
            nxt.extend(_insert_everywhere(t, x))
        trees = nxt
    yield from trees


def _insert_everywhere(t, x):
    yield (t, x)
    if isinstance(t, tuple):
        a, b = t
        for a2 in _insert_everywhere(a, x):
            yield (a2, b)
        for b2 in _insert_everywhere(b, x):
            yield (a, b2)


def _subtree_masks(t, out):
    if isinstance(t, tuple):
        m = _subtree_masks(t[0], out) | _subtree_masks(t[1], out)
    else:
        m = 1 << t
    out.append(m)
    return m


def tree_to_decomposition(t, root_label: int = 0) -> BranchDecomposition:
    dec = BranchDecomposition({}, {})
    counter = itertools.count()

    def build(node):
        u = next(counter)
        dec.adj.setdefault(u, [])
        if isinstance(node, tuple):
            for child in node:
                dec.add_edge(u, build(child))
        else:
            dec.labels[u] = node
        return u

    top = build(t)
    leaf = next(counter)
    dec.add_edge(top, leaf)
    dec.labels[leaf] = root_label
    return dec


def count_trees(n: int) -> int:
    return sum(1 for _ in rooted_trees(range(1, n)))


def brute_branch_width(f: ConnectivityOracle) -> tuple[int, BranchDecomposition | None]:
    """Optimum over every leaf-labelled subcubic tree (no pruning).

    Each unrooted tree is a rooted binary tree on ``1..n-1`` hung off leaf 0;
    its edge cuts are exactly the subtree leaf sets.
    """
    n = f.n
    if n > 9:
        raise UsageError("brute force is limited to 9 elements")
    if n <= 1:
        return 0, None
    best, arg = None, None
    for t in rooted_trees(range(1, n)):
        masks = []
        _subtree_masks(t, masks)
        w = max(f(m) for m in masks)
        if best is None or w < best:
            best, arg = w, t
    return best, tree_to_decomposition(arg)


def dp_branch_width(f: ConnectivityOracle) -> int:
    """Branch-width by dynamic programming over subsets of ``V - {0}``.

    ``w(S)`` is the least possible maximum cut inside a rooted binary tree
    with leaf set ``S``; the answer is ``w(V - {0})``. Independent of tree
    enumeration, and fast enough for n around 12.
    """
    n = f.n
    if n <= 1:
        return 0

    @lru_cache(maxsize=None)
    def w(s):
        if popcount(s) == 1:
            return f(s)
        low = s & -s
        rest = s ^ low
        best = None
        sub = rest
        # split s into (t, s - t) with the lowest element in t
        while True:
            t = low | sub
            if t != s:
                cand = max(w(t), w(s ^ t))
                if best is None or cand < best:
                    best = cand
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return max(f(s), best)

    return w(f.full ^ 1)


def brute_titanic(f: ConnectivityOracle, a: int) -> Tripartition | None:
    """None if ``a`` is titanic, else a tripartition with every part below
    ``f(a)``, found by scanning all ``3^|a|`` assignments. A witness with
    three nonempty parts is preferred when one exists."""
    elems = members(a)
    if len(elems) > 12:
        raise UsageError("brute titanic check is limited to 12 elements")
    fa = f(a)
    first = None
    for assign in itertools.product(range(3), repeat=len(elems)):
        parts = [0, 0, 0]
        for e, p in zip(elems, assign):
            parts[p] |= 1 << e
        if all(f(p) < fa for p in parts):
            if all(parts):
                return Tripartition(tuple(parts))
            if first is None:
                first = Tripartition(tuple(parts))
    return first


def brute_constrained_min(f: ConnectivityOracle, x: int, y: int) -> tuple[int, int]:
    """(value, smallest minimiser) over ``x <= Z <= V - y``."""
    free = members(f.full & ~(x | y))
    best = None
    for bits in range(1 << len(free)):
        z = x
        for i, e in enumerate(free):
            if bits >> i & 1:
                z |= 1 << e
        v = f(z)
        if best is None or (v, z) < best:
            best = (v, z)
    return best


def brute_common_independent(r1, r2, n: int) -> int:
    best = 0
    for s in range(1 << n):
        k = popcount(s)
        if k > best and r1(s) == k and r2(s) == k:
            best = k
    return best


def brute_dual_min(r1, r2, n: int) -> int:
    full = (1 << n) - 1
    return min(r1(u) + r2(full ^ u) for u in range(1 << n))


# --------------------------------------------------------------------------
# generators


def random_graph(seed: int, n: int, p: float = 0.5) -> Graph:
    rng = random.Random(seed)
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p))


def random_cubic_graph(seed: int, n: int) -> Graph:
    """Simple 3-regular graph on ``n`` (even) vertices by the pairing model
    with restarts."""
    if n % 2 or n < 4:
        raise UsageError("cubic graphs need an even n >= 4")
    rng = random.Random(seed)
    while True:
        points = [v for v in range(n) for _ in range(3)]
        rng.shuffle(points)
        edges = set()
        ok = True
        for a, b in zip(points[::2], points[1::2]):
            e = (min(a, b), max(a, b))
            if a == b or e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph(n, tuple(sorted(edges)))


def random_decomposition(seed: int, n: int) -> BranchDecomposition:
    """Uniformly grown random decomposition of ``0..n-1`` (n >= 2): each new
    leaf subdivides a random edge."""
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    dec = trivial_decomposition(order[: min(n, 3)])
    for e in order[3:]:
        u, v = rng.choice(dec.edges())
        attach_leaf(dec, u, v, e)
    return dec


def random_gf2_matrix(seed: int, rows: int, cols: int) -> list[list[int]]:
    rng = random.Random(seed)
    return [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rows)]


def random_table(seed: int, n: int, terms: int = 3, max_weight: int = 2) -> TableOracle:
    """Connectivity table built as a nonnegative integer combination of
    random graph cut functions."""
    rng = random.Random(seed)
    values = [0] * (1 << n)
    for _ in range(terms):
        g = random_graph(rng.randrange(1 << 30), n, rng.choice([0.3, 0.5, 0.7]))
        c = rng.randint(1, max_weight)
        f = carving_oracle(g)
        for x in range(1 << n):
            values[x] += c * f.evaluate(x) if x else 0
    return TableOracle(values, name=f"table{seed}")


def random_instance(seed: int, kind: str, size: int) -> ConnectivityOracle:
    """Seeded instance with ground set of ``size`` elements."""
    rng = random.Random(seed)
    if kind == "carving":
        return carving_oracle(random_graph(rng.randrange(1 << 30), size))
    if kind == "rankwidth":
        return cut_rank_oracle(random_graph(rng.randrange(1 << 30), size))
    if kind == "branchwidth":
        # a random graph with exactly `size` edges
        nv = max(3, rng.randint(size // 2 + 1, size + 1))
        pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
        while len(pairs) < size:
            nv += 1
            pairs = [(i, j) for i in range(nv) for j in range(i + 1, nv)]
        return graph_branchwidth_oracle(Graph(nv, tuple(rng.sample(pairs, size))))
    if kind == "matroid-gf2":
        rows = rng.randint(2, 4)
        return LambdaOracle(GF2Matroid.from_rows(random_gf2_matrix(rng.randrange(1 << 30), rows, size)))
    if kind == "table":
        return random_table(rng.randrange(1 << 30), size)
    raise UsageError(f"unknown instance kind {kind!r}")


INSTANCE_KINDS = ("carving", "branchwidth", "rankwidth", "matroid-gf2", "table")
