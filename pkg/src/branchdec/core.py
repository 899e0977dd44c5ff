"""Ground sets, connectivity oracles and branch-decompositions.

Element sets are plain Python ints used as bit vectors: bit ``i`` set means
element ``i`` is a member. All set algebra is therefore ``&``, ``|`` and
``^`` against the ground set's ``full`` mask.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable


class BranchDecError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(BranchDecError, ValueError):
    """A precondition of a public operation was violated by the caller."""


class ValidationError(BranchDecError):
    """An input object (decomposition, table, file) is malformed."""


class InvariantError(BranchDecError):
    """An internal invariant failed; indicates a bug or a broken oracle."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def lowest(mask: int) -> int:
    """Index of the lowest set bit; ``mask`` must be nonzero."""
    return (mask & -mask).bit_length() - 1


@dataclass(frozen=True)
class GroundSet:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise UsageError("ground set size must be nonnegative")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def complement(self, x: int) -> int:
        return self.full ^ x

    def check(self, x: int) -> int:
        if x < 0 or x & ~self.full:
            raise UsageError(f"set {x:#b} has elements outside the ground set of size {self.n}")
        return x


@dataclass(frozen=True)
class Cut:
    side: int
    value: int


@dataclass(frozen=True)
class Tripartition:
    parts: tuple[int, int, int]

    @property
    def union(self) -> int:
        a, b, c = self.parts
        return a | b | c

    def is_partition_of(self, a: int) -> bool:
        p, q, r = self.parts
        return not (p & q or q & r or p & r) and (p | q | r) == a


class ConnectivityOracle:
    """Cached evaluation of a connectivity function on subsets of ``0..n-1``.

    The cache key is the side of the bipartition that contains element 0, so a
    set and its complement share one underlying evaluation. ``queries`` counts
    cache misses only.
    """

    def __init__(self, n: int, func: Callable[[int], int] | None = None, name: str = "f"):
        self.ground = GroundSet(n)
        self.n = n
        self.full = self.ground.full
        self.name = name
        self._func = func
        self.cache: dict[int, int] = {}
        self.queries = 0
        self.minimizer = None  # set by callers that want a non-default sfm route

    def evaluate(self, x: int) -> int:
        """Uncached evaluation; subclasses override this or pass ``func``."""
        if self._func is None:
            raise NotImplementedError
        return self._func(x)

    def canonical(self, x: int) -> int:
        return x if x & 1 else self.full ^ x

    def __call__(self, x: int) -> int:
        if x < 0 or x & ~self.full:
            raise UsageError(f"set {x:#b} has elements outside the ground set of size {self.n}")
        key = x if x & 1 else self.full ^ x
        v = self.cache.get(key)
        if v is None:
            if key == 0 or key == self.full:
                v = 0
            else:
                v = int(self.evaluate(key))
                self.queries += 1
            self.cache[key] = v
        return v

    def singleton_values(self) -> list[int]:
        return [self(1 << i) for i in range(self.n)]

    def total_queries(self) -> int:
        """Underlying evaluations including those of any wrapped oracle."""
        return self.queries

    def lift(self, forced_in: int, forced_out: int):
        """Describe a constrained minimisation over this oracle as one over a
        base oracle: minimise ``base(base_in | union(chosen units))``.

        Returns ``(base, base_in, units, local_units, history)``: ``local_units``
        gives, per unit, the local mask it stands for (0 for units that are
        projected away), and ``history`` the laminar block family to respect.
        """
        free = self.full & ~(forced_in | forced_out)
        units = [1 << i for i in members(free)]
        return self, forced_in, units, list(units), ()

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, name={self.name!r})"


def cached_evaluate(oracle: ConnectivityOracle, x: int) -> int:
    return oracle(x)


def check_connectivity_sampled(oracle: ConnectivityOracle, samples: int = 1000, rng=None) -> None:
    """Raise ValidationError if sampled pairs break symmetry, submodularity,
    non-negativity or the zero conditions.

    Uses uncached evaluation so that symmetry is actually exercised.
    """
    import random

    rng = rng or random.Random(0)
    full, n = oracle.full, oracle.n
    if n == 0:
        return
    raw = oracle.evaluate
    if raw(0) != 0 or raw(full) != 0:
        raise ValidationError("f(empty) or f(V) is nonzero")
    for _ in range(samples):
        x, y = rng.getrandbits(n), rng.getrandbits(n)
        fx, fy = raw(x), raw(y)
        if fx < 0:
            raise ValidationError(f"negative value at {x:#b}")
        if fx != raw(full ^ x):
            raise ValidationError(f"symmetry fails at {x:#b}")
        if fx + fy < raw(x & y) + raw(x | y):
            raise ValidationError(f"submodularity fails at X={x:#b}, Y={y:#b}")


# --------------------------------------------------------------------------
# branch-decompositions


@dataclass
class BranchDecomposition:
    """Unrooted subcubic tree with leaves labelled by ground-set elements.

    ``adj`` maps node id to its neighbour list, ``labels`` maps leaf node to
    element id. ``widths`` is filled by :func:`decomposition_width`, keyed by
    ``(min(u, v), max(u, v))``.
    """

    adj: dict[int, list[int]]
    labels: dict[int, int]
    widths: dict[tuple[int, int], int] = field(default_factory=dict)

    def copy(self) -> "BranchDecomposition":
        return BranchDecomposition({u: list(vs) for u, vs in self.adj.items()}, dict(self.labels), dict(self.widths))

    @property
    def n_elements(self) -> int:
        return len(self.labels)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, vs in self.adj.items() for v in vs if u < v)

    def leaf_of(self) -> dict[int, int]:
        return {e: node for node, e in self.labels.items()}

    def element_mask(self) -> int:
        return mask_of(self.labels.values())

    def new_node(self) -> int:
        return max(self.adj, default=-1) + 1

    def add_edge(self, u: int, v: int) -> None:
        self.adj.setdefault(u, []).append(v)
        self.adj.setdefault(v, []).append(u)

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u].remove(v)
        self.adj[v].remove(u)

    def remove_node(self, u: int) -> None:
        for v in list(self.adj[u]):
            self.adj[v].remove(u)
        del self.adj[u]
        self.labels.pop(u, None)

    def side_masks(self) -> dict[tuple[int, int], int]:
        """For every ordered pair ``(u, v)`` of adjacent nodes, the element
        mask of the component of ``T - uv`` containing ``v``."""
        if not self.adj:
            return {}
        root = min(self.adj)
        parent = {root: None}
        order = []
        stack = [root]
        while stack:
            u = stack.pop()
            order.append(u)
            for v in self.adj[u]:
                if v not in parent:
                    parent[v] = u
                    stack.append(v)
        sub = {}
        for u in reversed(order):
            m = 1 << self.labels[u] if u in self.labels else 0
            for v in self.adj[u]:
                if parent.get(v) == u:
                    m |= sub[v]
            sub[u] = m
        full = sub[root]
        out = {}
        for v, p in parent.items():
            if p is None:
                continue
            out[(p, v)] = sub[v]
            out[(v, p)] = full ^ sub[v]
        return out

    def relabel(self, mapping) -> "BranchDecomposition":
        """Copy with every leaf label ``e`` replaced by ``mapping[e]``."""
        d = self.copy()
        d.labels = {node: mapping[e] for node, e in self.labels.items()}
        d.widths = {}
        return d


def validate_decomposition(dec: BranchDecomposition, n: int | None = None) -> str | None:
    """Return None if ``dec`` is a valid branch-decomposition (of ``0..n-1``
    when ``n`` is given), else a message naming the first violation."""
    adj = dec.adj
    if not adj:
        return "empty tree"
    for u, vs in adj.items():
        if len(set(vs)) != len(vs) or u in vs:
            return f"multi-edge or loop at node {u}"
        for v in vs:
            if v not in adj or u not in adj[v]:
                return f"asymmetric adjacency between nodes {u} and {v}"
    for u in sorted(adj):
        d = len(adj[u])
        if d not in (1, 3):
            return f"degree {d} at node {u}"
    n_edges = sum(len(vs) for vs in adj.values()) // 2
    if n_edges != len(adj) - 1:
        return "tree has a cycle or is disconnected"
    seen = {min(adj)}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    if len(seen) != len(adj):
        return "tree is disconnected"
    leaves = {u for u, vs in adj.items() if len(vs) == 1}
    for node in dec.labels:
        if node not in leaves:
            return f"label on non-leaf node {node}"
    for node in sorted(leaves):
        if node not in dec.labels:
            return f"unlabelled leaf {node}"
    values = list(dec.labels.values())
    if len(set(values)) != len(values):
        return "label not injective"
    if n is not None and sorted(values) != list(range(n)):
        return f"labels are not a bijection onto 0..{n - 1}"
    if len(leaves) < 2:
        return "fewer than two leaves"
    return None


def decomposition_width(oracle: ConnectivityOracle, dec: BranchDecomposition) -> int:
    """Maximum edge width; fills ``dec.widths``."""
    problem = validate_decomposition(dec, oracle.n)
    if problem:
        raise ValidationError(problem)
    sides = dec.side_masks()
    dec.widths = {}
    for u, v in dec.edges():
        dec.widths[(u, v)] = oracle(sides[(u, v)])
    return max(dec.widths.values())


# -- constructors ----------------------------------------------------------


def caterpillar(order: list[int]) -> BranchDecomposition:
    """Caterpillar whose leaves read ``order`` left to right (len >= 2)."""
    m = len(order)
    if m < 2:
        raise UsageError("a decomposition needs at least two elements")
    dec = BranchDecomposition({}, {})
    if m == 2:
        dec.add_edge(0, 1)
        dec.labels = {0: order[0], 1: order[1]}
        return dec
    # spine nodes 0..m-3, leaves m-2 .. 2m-3
    spine = list(range(m - 2))
    for a, b in zip(spine, spine[1:]):
        dec.add_edge(a, b)
    leaf = m - 2
    for i, e in enumerate(order):
        s = spine[max(0, min(i - 1, m - 3))]
        dec.add_edge(s, leaf)
        dec.labels[leaf] = e
        leaf += 1
    return dec


def trivial_decomposition(elements: list[int]) -> BranchDecomposition:
    """The unique tree for 2 or 3 elements."""
    if len(elements) not in (2, 3):
        raise UsageError("unique tree shape exists only for 2 or 3 elements")
    return caterpillar(list(elements))


# -- surgery ---------------------------------------------------------------


def prune_unlabelled(dec: BranchDecomposition) -> None:
    """Repeatedly delete unlabelled degree-<=1 nodes (in place)."""
    stack = [u for u, vs in dec.adj.items() if len(vs) <= 1 and u not in dec.labels]
    while stack:
        u = stack.pop()
        if u not in dec.adj or u in dec.labels or len(dec.adj[u]) > 1:
            continue
        nbrs = list(dec.adj[u])
        dec.remove_node(u)
        for v in nbrs:
            if len(dec.adj[v]) <= 1 and v not in dec.labels:
                stack.append(v)


def smoothen(dec: BranchDecomposition) -> BranchDecomposition:
    """Copy of ``dec`` with every degree-2 node suppressed."""
    d = dec.copy()
    d.widths = {}
    for u in sorted(d.adj):
        if u in d.adj and len(d.adj[u]) == 2:
            a, b = d.adj[u]
            d.remove_node(u)
            d.add_edge(a, b)
    return d


def subdivide(dec: BranchDecomposition, u: int, v: int) -> int:
    """Insert a new node on edge ``uv`` (in place) and return its id."""
    w = dec.new_node()
    dec.remove_edge(u, v)
    dec.add_edge(u, w)
    dec.add_edge(w, v)
    return w


def attach_leaf(dec: BranchDecomposition, u: int, v: int, element: int) -> int:
    """Subdivide ``uv`` and hang a new leaf labelled ``element`` off it."""
    w = subdivide(dec, u, v)
    leaf = dec.new_node()
    dec.add_edge(w, leaf)
    dec.labels[leaf] = element
    return leaf


def glue_decompositions(dec1: BranchDecomposition, leaf1: int, dec2: BranchDecomposition, leaf2: int) -> BranchDecomposition:
    """Join two decompositions at marked leaves.

    The marked leaves are removed and their neighbours joined by a new edge.
    Labels are kept as given; callers relabel beforehand so that the two
    label sets are disjoint.
    """
    if leaf1 not in dec1.labels or leaf2 not in dec2.labels:
        raise UsageError("marked nodes must be labelled leaves")
    l1 = set(dec1.labels.values()) - {dec1.labels[leaf1]}
    l2 = set(dec2.labels.values()) - {dec2.labels[leaf2]}
    if l1 & l2:
        raise UsageError("decompositions share elements outside the marked leaves")
    out = dec1.copy()
    out.widths = {}
    (n1,) = out.adj[leaf1]
    out.remove_node(leaf1)
    offset = out.new_node()
    (n2,) = dec2.adj[leaf2]
    for u, vs in dec2.adj.items():
        if u == leaf2:
            continue
        out.adj[u + offset] = [v + offset for v in vs if v != leaf2]
    for u, e in dec2.labels.items():
        if u != leaf2:
            out.labels[u + offset] = e
    out.add_edge(n1, n2 + offset)
    return out


def canonical_form(dec: BranchDecomposition) -> BranchDecomposition:
    """Renumber nodes depth-first from the lowest-labelled leaf.

    Children are visited in order of the smallest element below them, so the
    result depends only on the tree shape and labels.
    """
    start = min(dec.labels, key=dec.labels.get)
    sides = dec.side_masks()
    new = {start: 0}
    out = BranchDecomposition({0: []}, {})
    stack = [(start, None)]
    edges = []
    while stack:
        u, p = stack.pop()
        children = [v for v in dec.adj[u] if v != p]
        children.sort(key=lambda v: lowest(sides[(u, v)]), reverse=True)
        for v in children:
            stack.append((v, u))
        if p is not None:
            new[u] = len(new)
            edges.append((new[p], new[u]))
    for a, b in edges:
        out.add_edge(a, b)
    out.labels = {new[u]: e for u, e in dec.labels.items()}
    return out
