"""Decision and search for branch-width of a connectivity function.

The pipeline is iterative compression: decompositions of the restrictions
``f_i`` on growing prefixes of the ground set are kept at width <= k; each
new element is hung next to the previous one (width <= 2k) and the result is
compressed back to width <= k by splitting along a cut whose two sides are
titanic, merging each side, and recursing on the two smaller functions.
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field

from .contraction import MergedOracle, convert_decomposition
from .core import (
    BranchDecomposition,
    ConnectivityOracle,
    InvariantError,
    UsageError,
    attach_leaf,
    decomposition_width,
    glue_decompositions,
    popcount,
    trivial_decomposition,
    validate_decomposition,
)
from .sfm import Minimizer, interpolation_fmin
from .split import SplitTrace, titanic_split

log = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    base_threshold: int = 8
    sfm: str = "auto"
    sfm_threshold: int = 12
    debug: bool = True
    seed: int | None = None
    prune_visited: bool = False
    matroid_fast_path: bool = True

    def __post_init__(self):
        if self.base_threshold < 4:
            raise UsageError("base threshold must be at least 4")

    def make_minimizer(self, oracle: ConnectivityOracle | None = None) -> Minimizer:
        from .matroid import LambdaOracle, MatroidMinimizer

        if self.matroid_fast_path and isinstance(oracle, LambdaOracle):
            return MatroidMinimizer(self.sfm, self.sfm_threshold)
        return Minimizer(self.sfm, self.sfm_threshold)

    def order(self, n: int) -> list[int]:
        order = list(range(n))
        if self.seed is not None:
            random.Random(self.seed).shuffle(order)
        return order


@dataclass
class SolveOutcome:
    k: int
    decomposition: BranchDecomposition | None = None
    width: int | None = None
    exceeded: bool = False
    level: int | None = None  # prefix size at which "> k" was established

    @property
    def ok(self) -> bool:
        return not self.exceeded


@dataclass
class SolverStats:
    counts: Counter = field(default_factory=Counter)
    split_traces: list[SplitTrace] = field(default_factory=list)


# --------------------------------------------------------------------------
# exact base case


@dataclass
class ExactResult:
    width: int | None
    decomposition: BranchDecomposition | None
    trees: int = 0
    nodes: int = 0


def exact_base(f: ConnectivityOracle, limit: int | None = None, prune: bool = True,
               max_n: int | None = None) -> ExactResult:
    """Minimum-width decomposition by leaf insertion with branch and bound.

    Leaves ``1..n-1`` are inserted in order into a rooted binary tree whose
    root hangs off leaf 0; every insertion point is tried, giving all
    ``(2n-5)!!`` trees. A partial tree on ``V_j = {0..j}`` is bounded below by
    ``max f_min(S, V_j - S)`` over its subtree sets ``S``, since any completion
    turns ``S`` into a superset avoiding ``V_j - S``.

    With ``limit`` the search looks only for width <= limit and returns
    ``width=None`` if there is none.
    """
    n = f.n
    if max_n is not None and n > max_n:
        raise UsageError(f"exact base case limited to {max_n} elements, got {n}")
    if n <= 1:
        return ExactResult(0, None)
    best = [limit + 1 if limit is not None else None, None]
    res = ExactResult(None, None)
    parent = {1: -1}
    kids: dict[int, tuple[int, int]] = {}
    mask = {1: 0b10}
    root = [1]
    nxt = [n]

    def bound(j: int) -> int:
        vj = (1 << (j + 1)) - 1
        return max(interpolation_fmin(f, s, vj & ~s) for s in mask.values())

    def record():
        dec = BranchDecomposition({}, {e: e for e in range(n)})
        for c, p in parent.items():
            dec.add_edge(c, p if p >= 0 else 0)
        return dec

    def rec(j: int):
        res.nodes += 1
        b = bound(j)
        if prune and best[0] is not None and b >= best[0]:
            return
        if j == n - 1:
            res.trees += 1
            if best[0] is None or b < best[0]:
                best[0], best[1] = b, record()
            return
        x = j + 1
        bit = 1 << x
        for c in sorted(mask):
            w = nxt[0]
            nxt[0] += 1
            p = parent[c]
            # insert w above c with children (c, x)
            parent[w] = p
            if p >= 0:
                a, bb = kids[p]
                kids[p] = (w, bb) if a == c else (a, w)
            else:
                root[0] = w
            kids[w] = (c, x)
            parent[c] = w
            parent[x] = w
            mask[w] = mask[c] | bit
            mask[x] = bit
            q = p
            while q >= 0:
                mask[q] |= bit
                q = parent[q]
            rec(x)
            q = p
            while q >= 0:
                mask[q] &= ~bit
                q = parent[q]
            del mask[x], mask[w], parent[x], kids[w]
            parent[c] = p
            if p >= 0:
                a, bb = kids[p]
                kids[p] = (c, bb) if a == w else (a, c)
            else:
                root[0] = c
            del parent[w]
            nxt[0] -= 1

    rec(1)
    if best[1] is None:
        return ExactResult(None, None, res.trees, res.nodes)
    return ExactResult(best[0], best[1], res.trees, res.nodes)


# --------------------------------------------------------------------------
# compression


def _unique_tree(f: ConnectivityOracle) -> BranchDecomposition:
    return trivial_decomposition(list(range(f.n)))


def compress(f: ConnectivityOracle, dec: BranchDecomposition, k: int, config: SolverConfig | None = None,
             stats: SolverStats | None = None) -> SolveOutcome:
    """Given a decomposition of ``f``, find one of width <= k or report that
    the branch-width exceeds k."""
    config = config or SolverConfig()
    stats = stats if stats is not None else SolverStats()
    stats.counts["compress"] += 1
    n = f.n
    if k < 0:
        raise UsageError("k must be nonnegative")
    if n <= 1:
        return SolveOutcome(k, None, 0)
    if max(f.singleton_values()) > k:
        return SolveOutcome(k, exceeded=True)
    if n <= 3:
        out = _unique_tree(f)
        return SolveOutcome(k, out, decomposition_width(f, out))
    problem = validate_decomposition(dec, n)
    if problem:
        raise UsageError(f"invalid input decomposition: {problem}")
    width = decomposition_width(f, dec)
    if width <= k:
        return SolveOutcome(k, dec, width)
    if n <= config.base_threshold:
        return _base(f, k, stats)

    trace = SplitTrace()
    cut = titanic_split(f, dec, width, trace)
    stats.counts["split"] += 1
    stats.split_traces.append(trace)
    a = cut.side
    if min(popcount(a), n - popcount(a)) <= 1:
        stats.counts["split_degenerate"] += 1
        return _base(f, k, stats)
    if cut.value > k:
        return SolveOutcome(k, exceeded=True)

    results = []
    for side in (a, f.full ^ a):
        conv = convert_decomposition(f, dec, side, "both", check=config.debug)
        stats.counts["convert"] += 1
        sub = compress(conv.oracle, conv.dec, k, config, stats)
        if sub.exceeded:
            return SolveOutcome(k, exceeded=True)
        results.append((conv, sub.decomposition))

    parts = []
    for marker, (conv, d) in zip((-1, -2), results):
        inverse = {new: old for old, new in enumerate(conv.mapping) if new != conv.block}
        inverse[conv.block] = marker
        d = d.relabel(inverse)
        (leaf,) = [node for node, e in d.labels.items() if e == marker]
        parts.append((d, leaf))
    glued = glue_decompositions(parts[0][0], parts[0][1], parts[1][0], parts[1][1])
    stats.counts["glue"] += 1
    glued = _renumber(glued)
    if config.debug:
        problem = validate_decomposition(glued, n)
        if problem:
            raise InvariantError(f"glued decomposition invalid: {problem}")
    w = decomposition_width(f, glued)
    if w > k:
        raise InvariantError(f"glued decomposition has width {w} > {k}")
    return SolveOutcome(k, glued, w)


def _base(f, k, stats) -> SolveOutcome:
    stats.counts["exact_base"] += 1
    res = exact_base(f, limit=k)
    if res.decomposition is None:
        return SolveOutcome(k, exceeded=True)
    return SolveOutcome(k, res.decomposition, res.width)


def _renumber(dec: BranchDecomposition) -> BranchDecomposition:
    ids = {u: i for i, u in enumerate(sorted(dec.adj))}
    return BranchDecomposition({ids[u]: [ids[v] for v in vs] for u, vs in dec.adj.items()},
                               {ids[u]: e for u, e in dec.labels.items()})


# --------------------------------------------------------------------------
# iterative compression and search


def iterative_compression(f: ConnectivityOracle, k: int, config: SolverConfig | None = None,
                          stats: SolverStats | None = None) -> SolveOutcome:
    """Decide whether ``bw(f) <= k``; on success return a witness.

    ``f_i(X) = f_min(X, V_i - X)`` is evaluated by a :class:`MergedOracle`
    with the not-yet-inserted elements as its outside set. Minimising ``f_i``
    (or any merge of it) over a constrained range is a single constrained
    minimisation of ``f``: a feasible ``Z`` for ``f`` gives ``W = Z & V_i``
    with ``f_i(W) <= f(Z)``, and the inner minimiser of ``f_i(W)`` is itself
    feasible for ``f`` with the same forced sets.
    """
    config = config or SolverConfig()
    stats = stats if stats is not None else SolverStats()
    if k < 0:
        raise UsageError("k must be nonnegative")
    n = f.n
    if n <= 1:
        return SolveOutcome(k, None, 0)
    if max(f.singleton_values()) > k:
        return SolveOutcome(k, exceeded=True, level=1)
    order = config.order(n)
    if n <= 3:
        dec = trivial_decomposition(order)
        return SolveOutcome(k, dec, decomposition_width(f, dec))
    minimizer = config.make_minimizer(f)
    dec = trivial_decomposition([0, 1, 2])
    for i in range(3, n):
        d = dec.copy()
        leaf = d.leaf_of()[i - 1]
        (nb,) = d.adj[leaf]
        attach_leaf(d, leaf, nb, i)
        fi = MergedOracle.restriction(f, order[: i + 1], minimizer)
        if config.debug and decomposition_width(fi, d) > 2 * k:
            raise InvariantError("extended decomposition exceeds 2k")
        out = compress(fi, d, k, config, stats)
        stats.counts["levels"] += 1
        if out.exceeded:
            log.debug("branch-width > %d established at prefix size %d", k, i + 1)
            return SolveOutcome(k, exceeded=True, level=i + 1)
        dec = out.decomposition
    final = dec.relabel(order)
    w = decomposition_width(f, final)
    if w > k:
        raise InvariantError(f"final decomposition has width {w} > {k}")
    return SolveOutcome(k, final, w)


def search_min_width(f: ConnectivityOracle, config: SolverConfig | None = None,
                     stats: SolverStats | None = None) -> tuple[int, BranchDecomposition | None]:
    """Branch-width of ``f`` and an optimal decomposition (None if n <= 1)."""
    if f.n <= 1:
        return 0, None
    stats = stats if stats is not None else SolverStats()
    k = max(f.singleton_values())
    while True:
        out = iterative_compression(f, k, config, stats)
        if out.ok:
            if out.width != k:
                raise InvariantError(f"first feasible k={k} but decomposition has width {out.width}")
            return k, out.decomposition
        k += 1
