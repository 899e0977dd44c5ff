"""Matroid rank oracles and the matroid-intersection route to lambda-minimisation.

``lambda(X) = r(X) + r(E - X) - r(E)``. Minimising it between forced sets is
a matroid intersection of a contraction-deletion pair, which replaces
general submodular minimisation inside the solver.
"""

from __future__ import annotations

from collections import deque

from .core import ConnectivityOracle, InvariantError, UsageError, members, popcount
from .sfm import Minimizer, MinResult


class MatroidRankOracle:
    """Rank function on subsets (bit masks) of ``0..n-1``, with a cache."""

    def __init__(self, n: int, name: str = "M"):
        self.n = n
        self.full = (1 << n) - 1
        self.name = name
        self.cache: dict[int, int] = {}
        self.queries = 0

    def _rank(self, x: int) -> int:
        raise NotImplementedError

    def rank(self, x: int) -> int:
        v = self.cache.get(x)
        if v is None:
            if x & ~self.full:
                raise UsageError("set outside the matroid ground set")
            v = self._rank(x) if x else 0
            self.queries += 1
            self.cache[x] = v
        return v

    __call__ = rank

    def independent(self, x: int) -> bool:
        return self.rank(x) == popcount(x)


def gf2_rank(vectors: list[int]) -> int:
    """Rank over GF(2) of integer-encoded vectors (xor basis by leading bit)."""
    basis: dict[int, int] = {}
    r = 0
    for v in vectors:
        while v:
            hb = v.bit_length() - 1
            b = basis.get(hb)
            if b is None:
                basis[hb] = v
                r += 1
                break
            v ^= b
    return r


class GF2Matroid(MatroidRankOracle):
    """Column matroid of a 0/1 matrix; ``columns[j]`` has bit ``i`` set when
    row ``i`` of column ``j`` is 1."""

    def __init__(self, columns: list[int], name: str = "gf2"):
        super().__init__(len(columns), name)
        self.columns = list(columns)

    @classmethod
    def from_rows(cls, rows: list[list[int]]) -> "GF2Matroid":
        ncols = len(rows[0]) if rows else 0
        cols = [0] * ncols
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise UsageError("ragged matrix")
            for j, b in enumerate(row):
                if b:
                    cols[j] |= 1 << i
        return cls(cols)

    def _rank(self, x: int) -> int:
        return gf2_rank([self.columns[j] for j in members(x)])


class GraphicMatroid(MatroidRankOracle):
    """Cycle matroid: rank is (vertices touched) - (components)."""

    def __init__(self, n_vertices: int, edges: list[tuple[int, int]], name: str = "graphic"):
        super().__init__(len(edges), name)
        self.n_vertices = n_vertices
        self.edges = list(edges)

    def _rank(self, x: int) -> int:
        parent = {}

        def find(u):
            parent.setdefault(u, u)
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        r = 0
        for j in members(x):
            a, b = self.edges[j]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                r += 1
        return r


class UniformMatroid(MatroidRankOracle):
    def __init__(self, rank: int, n: int):
        super().__init__(n, f"U{rank},{n}")
        self.r = rank

    def _rank(self, x: int) -> int:
        return min(self.r, popcount(x))


class TableMatroid(MatroidRankOracle):
    def __init__(self, values: list[int], name: str = "table"):
        n = len(values).bit_length() - 1
        if len(values) != 1 << n:
            raise UsageError("rank table length must be a power of two")
        super().__init__(n, name)
        self.values = list(values)

    def _rank(self, x: int) -> int:
        return self.values[x]


class LambdaOracle(ConnectivityOracle):
    def __init__(self, matroid: MatroidRankOracle):
        super().__init__(matroid.n, name=f"lambda[{matroid.name}]")
        self.matroid = matroid
        self._rE = matroid.rank(matroid.full)

    def evaluate(self, x: int) -> int:
        r = self.matroid.rank
        return r(x) + r(self.full ^ x) - self._rE


# --------------------------------------------------------------------------
# intersection


def matroid_intersection(r1, r2, ground: int) -> tuple[int, int]:
    """Maximum common independent set ``I`` and a minimiser ``U`` of
    ``r1(U) + r2(ground - U)``, both as masks inside ``ground``.

    Augments along shortest paths of the exchange graph (breadth first,
    smallest ids first). Arcs ``y -> x`` (``y`` in ``I``) record M1
    exchanges, arcs ``x -> y`` record M2 exchanges.
    """
    elems = members(ground)
    I = 0
    size = 0
    while True:
        outside = [x for x in elems if not I >> x & 1]
        inside = [y for y in elems if I >> y & 1]
        sources = [x for x in outside if r1(I | 1 << x) == size + 1]
        sinks = {x for x in outside if r2(I | 1 << x) == size + 1}
        arcs = _exchange_arcs(r1, r2, I, size, inside, outside)
        path = _shortest_path(sources, sinks, arcs)
        if path is None:
            break
        for e in path:
            I ^= 1 << e
        size += 1
        if popcount(I) != size or r1(I) != size or r2(I) != size:
            raise InvariantError("augmentation produced a dependent set; rank oracle inconsistent")
    # U: elements from which a sink is reachable
    reverse: dict[int, list[int]] = {}
    for u, vs in arcs.items():
        for v in vs:
            reverse.setdefault(v, []).append(u)
    reach = set(sinks)
    queue = deque(sorted(sinks))
    while queue:
        v = queue.popleft()
        for u in reverse.get(v, ()):
            if u not in reach:
                reach.add(u)
                queue.append(u)
    U = 0
    for e in reach:
        U |= 1 << e
    if r1(U) + r2(ground & ~U) != size:
        raise InvariantError("intersection certificate failed; rank oracle inconsistent")
    return I, U


def _exchange_arcs(r1, r2, I, size, inside, outside) -> dict[int, list[int]]:
    arcs: dict[int, list[int]] = {}
    for y in inside:
        base = I & ~(1 << y)
        for x in outside:
            s = base | 1 << x
            if r1(s) == size:
                arcs.setdefault(y, []).append(x)
            if r2(s) == size:
                arcs.setdefault(x, []).append(y)
    for u in arcs:
        arcs[u].sort()
    return arcs


def _shortest_path(sources, sinks, arcs):
    prev = {}
    queue = deque()
    for s in sorted(sources):
        prev[s] = None
        queue.append(s)
    while queue:
        u = queue.popleft()
        if u in sinks:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            return path[::-1]
        for v in arcs.get(u, ()):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    return None


def lambda_min(matroid: MatroidRankOracle, forced_in: int, forced_out: int) -> MinResult:
    """Minimise lambda over ``forced_in <= Z <= E - forced_out``."""
    if forced_in & forced_out:
        raise UsageError("forced-in and forced-out sets intersect")
    r = matroid.rank
    x, y = forced_in, forced_out
    rx, ry, re = r(x), r(y), r(matroid.full)
    free = matroid.full & ~(x | y)

    def r1(u):
        return r(u | x) - rx

    def r2(u):
        return r(u | y) - ry

    I, U = matroid_intersection(r1, r2, free)
    z = U | x
    value = r(z) + r(matroid.full ^ z) - re
    if value != popcount(I) - (re - rx - ry):
        raise InvariantError("lambda minimum disagrees with the intersection certificate")
    return MinResult(z, value)


def round_to_blocks(f: ConnectivityOracle, z: int, blocks, forced_in: int = 0, forced_out: int = 0) -> int | None:
    """Make ``z`` a union of whole blocks without raising ``f``.

    Blocks are processed smallest first (innermost in a laminar family). A
    split block is either absorbed or removed, whichever does not increase
    the value. Returns ``None`` if neither move works for some block.
    """
    cur = f(z)
    for b in sorted(blocks, key=lambda m: (popcount(m), m)):
        part = z & b
        if part == 0 or part == b:
            continue
        up, down = z | b, z & ~b
        if not up & forced_out and f(up) <= cur:
            z, cur = up, f(up)
        elif not b & forced_in and f(down) <= cur:
            z, cur = down, f(down)
        else:
            return None
    return z


class MatroidMinimizer(Minimizer):
    """Routes minimisation of a :class:`LambdaOracle` through
    :func:`lambda_min` plus block rounding; anything else, and any rounding
    failure, goes to the generic strategy."""

    def __init__(self, strategy: str = "auto", threshold: int = 12, **kw):
        super().__init__(strategy, threshold, **kw)
        self.stats.update(matroid_calls=0, rounding_failures=0)

    def minimize_units(self, base, base_in, units, history=()):
        if not isinstance(base, LambdaOracle) or not units:
            return super().minimize_units(base, base_in, units, history)
        span = 0
        for u in units:
            span |= u
        base_out = base.full & ~(base_in | span)
        self.stats["matroid_calls"] += 1
        raw = lambda_min(base.matroid, base_in, base_out)
        blocks = [u for u in units if popcount(u) > 1] + list(history)
        z = round_to_blocks(base, raw.minimizer, blocks, base_in, base_out)
        if z is None:
            self.stats["rounding_failures"] += 1
            return super().minimize_units(base, base_in, units, history)
        value = base(z)
        if value != raw.value:
            raise InvariantError("rounded minimiser changed the lambda value")
        chosen = 0
        for i, u in enumerate(units):
            if z & u:
                chosen |= 1 << i
        return value, chosen


def matroid_branch_width(matroid: MatroidRankOracle, k: int, config=None):
    """Decide matroid branch-width <= k via the lambda oracle."""
    from .solver import SolverConfig, iterative_compression

    config = config or SolverConfig()
    return iterative_compression(LambdaOracle(matroid), k, config)
