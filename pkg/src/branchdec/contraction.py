"""Merging a set of elements into one, and carrying decompositions along.

A :class:`MergedOracle` evaluates a set of block ids by expanding it to base
elements. It may also carry a set of *outside* base elements which are not
part of its ground set and are minimised over on every evaluation:

    value(S) = min f(Z)  over  expand(S) <= Z <= expand(S) | outside

With ``outside == 0`` this is plain merging; with ``outside = V - V_i`` and
singleton blocks it is the restriction ``f_i(X) = f_min(X, V_i - X)`` used by
iterative compression. Both are connectivity functions, and merging commutes
with the construction, so the solver only ever deals with this one class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    BranchDecomposition,
    ConnectivityOracle,
    InvariantError,
    UsageError,
    attach_leaf,
    decomposition_width,
    members,
    popcount,
    prune_unlabelled,
    smoothen,
    trivial_decomposition,
    validate_decomposition,
)
from .sfm import minimizer_for


@dataclass(frozen=True)
class MergedGroundSet:
    """Partition of ``0..n-1`` into blocks, with the laminar merge history."""

    n: int
    blocks: tuple[int, ...]
    history: tuple[int, ...] = ()

    @classmethod
    def singletons(cls, elements) -> "MergedGroundSet":
        elements = list(elements)
        n = max(elements, default=-1) + 1
        return cls(n, tuple(1 << e for e in elements))

    def expand(self, local: int) -> int:
        out = 0
        i = 0
        while local:
            if local & 1:
                out |= self.blocks[i]
            local >>= 1
            i += 1
        return out

    def merge(self, a: int) -> tuple["MergedGroundSet", list[int]]:
        """Merge the blocks with ids in mask ``a`` into one block.

        The new block takes the id of the smallest merged id; other blocks keep
        their relative order. Returns the new ground and the old->new id map.
        """
        b = len(self.blocks)
        if a == 0 or a == (1 << b) - 1 or a >> b:
            raise UsageError("merge needs a proper nonempty set of blocks")
        ids = members(a)
        if len(ids) == 1:
            return self, list(range(b))
        first = ids[0]
        union = self.expand(a)
        blocks = []
        mapping = [0] * b
        for i, blk in enumerate(self.blocks):
            if a >> i & 1:
                if i == first:
                    mapping[i] = len(blocks)
                    blocks.append(union)
                else:
                    mapping[i] = -1
            else:
                mapping[i] = len(blocks)
                blocks.append(blk)
        for i in ids:
            mapping[i] = mapping[first]
        hist = self.history + tuple(self.blocks[i] for i in ids if popcount(self.blocks[i]) > 1) + (union,)
        hist = tuple(dict.fromkeys(hist))
        return MergedGroundSet(self.n, tuple(blocks), hist), mapping

    def is_laminar(self) -> bool:
        fam = list(self.history) + list(self.blocks)
        return all(x & y in (0, x, y) for x in fam for y in fam)


class MergedOracle(ConnectivityOracle):
    def __init__(self, base: ConnectivityOracle, ground: MergedGroundSet, outside: int = 0, minimizer=None):
        if isinstance(base, MergedOracle):
            raise UsageError("base of a MergedOracle must be an unmerged oracle")
        covered = 0
        for blk in ground.blocks:
            if not blk or blk & covered:
                raise UsageError("blocks must be nonempty and pairwise disjoint")
            covered |= blk
        if covered & outside or (covered | outside) != base.full:
            raise UsageError("blocks and outside must partition the base ground set")
        super().__init__(len(ground.blocks), name=f"{base.name}<merged>")
        self.base = base
        self.mground = ground
        self.outside = outside
        self._outside_units = [1 << e for e in members(outside)]
        self.minimizer = minimizer if minimizer is not None else base.minimizer

    @classmethod
    def restriction(cls, base: ConnectivityOracle, order: list[int], minimizer=None) -> "MergedOracle":
        """``f_i`` on the elements of ``order`` (local id j <-> order[j])."""
        ground = MergedGroundSet(base.n, tuple(1 << e for e in order))
        inside = 0
        for e in order:
            inside |= 1 << e
        return cls(base, ground, base.full ^ inside, minimizer)

    def expand(self, local: int) -> int:
        return self.mground.expand(local)

    def evaluate(self, x: int) -> int:
        z = self.expand(x)
        if not self.outside:
            return self.base(z)
        value, _ = minimizer_for(self).minimize_units(self.base, z, self._outside_units, ())
        return value

    def total_queries(self) -> int:
        return self.base.queries

    def lift(self, forced_in: int, forced_out: int):
        free = self.full & ~(forced_in | forced_out)
        ids = members(free)
        units = [self.mground.blocks[i] for i in ids] + self._outside_units
        local = [1 << i for i in ids] + [0] * len(self._outside_units)
        span = 0
        for u in units:
            span |= u
        hist = tuple(h for h in self.mground.history if h & span == h)
        return self.base, self.expand(forced_in), units, local, hist

    def merged(self, a: int) -> tuple["MergedOracle", list[int]]:
        ground, mapping = self.mground.merge(a)
        return MergedOracle(self.base, ground, self.outside, self.minimizer), mapping


def as_merged(f: ConnectivityOracle) -> MergedOracle:
    if isinstance(f, MergedOracle):
        return f
    return MergedOracle(f, MergedGroundSet(f.n, tuple(1 << i for i in range(f.n))), 0, f.minimizer)


def merge_block(f: ConnectivityOracle, a: int) -> tuple[MergedOracle, list[int]]:
    """``f`` with the elements of ``a`` merged; returns the oracle on the new
    ground and the old->new element id map."""
    return as_merged(f).merged(a)


def expand_blocks(f: MergedOracle, dec: BranchDecomposition) -> dict[int, int]:
    """Leaf node -> mask of base elements it stands for."""
    return {node: f.mground.blocks[e] for node, e in dec.labels.items()}


@dataclass
class Conversion:
    dec: BranchDecomposition
    oracle: MergedOracle
    mapping: list[int]
    block: int
    sink_size: int = 0


def convert_decomposition(f: ConnectivityOracle, dec: BranchDecomposition, a: int, mode: str = "both",
                          check: bool = True) -> Conversion:
    """Turn a decomposition of ``f`` into one of ``f`` with ``a`` merged,
    without increasing the width, for titanic ``a``.

    ``mode`` is ``"both"`` (the complement of ``a`` is titanic too) or
    ``"small"`` (``f(a)`` is at most the width of ``dec``); it only affects
    the precondition check.
    """
    if mode not in ("both", "small"):
        raise UsageError(f"unknown conversion mode {mode!r}")
    m = f.n
    if a == 0 or a == f.full:
        raise UsageError("merged set must be proper and nonempty")
    merged, mapping = merge_block(f, a)
    block = mapping[members(a)[0]]
    k = decomposition_width(f, dec) if check else None
    if mode == "small" and check and f(a) > k:
        raise UsageError("f(A) exceeds the width of the decomposition")

    if popcount(a) == 1:
        return Conversion(dec.relabel(mapping), merged, mapping, block)
    if merged.n <= 3:
        out = trivial_decomposition(list(range(merged.n)))
        return _finish(out, merged, mapping, block, k, check)

    sides = dec.side_masks()
    fa = f(a)
    # toward[(u, v)]: edge uv is oriented towards v
    toward = {}
    for u, v in dec.edges():
        for p, q in ((u, v), (v, u)):
            if len(dec.adj[q]) == 1:
                toward[(p, q)] = False
                continue
            side = sides[(q, p)]  # elements on p's side
            toward[(p, q)] = f(side & ~a) <= f(side)
        if not (toward[(u, v)] or toward[(v, u)]):
            raise InvariantError(f"edge {u}-{v} received no orientation")

    parent = {u: u for u in dec.adj}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for u, v in dec.edges():
        if toward[(u, v)] and toward[(v, u)]:
            parent[find(u)] = find(v)
    out_arcs = {find(u): 0 for u in dec.adj}
    for u, v in dec.edges():
        if toward[(u, v)] and not toward[(v, u)]:
            out_arcs[find(u)] += 1
        elif toward[(v, u)] and not toward[(u, v)]:
            out_arcs[find(v)] += 1
    sinks = [c for c, d in out_arcs.items() if d == 0]
    if len(sinks) != 1:
        raise InvariantError(f"expected exactly one sink component, found {len(sinks)}")
    sink = sinks[0]
    inside = [u for u in dec.adj if find(u) == sink]
    candidates = sorted(u for u in inside if len(dec.adj[u]) == 3)
    if not candidates:
        raise InvariantError("sink component contains no internal node")
    s = candidates[0]

    e1 = None
    for nb in sorted(dec.adj[s]):
        if f(sides[(s, nb)] & a) >= fa:
            e1 = nb
            break
    if e1 is None:
        raise InvariantError("no edge at the sink qualifies; is A titanic?")

    out = dec.copy()
    out.widths = {}
    marker = -1
    attach_leaf(out, s, e1, marker)
    for node, e in list(out.labels.items()):
        if e >= 0 and a >> e & 1:
            out.remove_node(node)
    prune_unlabelled(out)
    out = smoothen(out)
    out.labels = {node: (block if e == marker else mapping[e]) for node, e in out.labels.items()}
    return _finish(out, merged, mapping, block, k, check, len(inside))


def _finish(out, merged, mapping, block, k, check, sink_size=0) -> Conversion:
    problem = validate_decomposition(out, merged.n)
    if problem:
        raise InvariantError(f"converted decomposition is invalid: {problem}")
    if check:
        w = decomposition_width(merged, out)
        if w > k:
            raise InvariantError(f"conversion increased width from {k} to {w}")
    return Conversion(out, merged, mapping, block, sink_size)
