"""Concrete connectivity functions and instance file parsers.

File formats (comment lines start with ``c``, blank lines are ignored):

* graph:  ``p graph <n> <m>`` then ``m`` lines ``e <u> <v> ...`` (1-indexed
  vertices; more than two endpoints make a hyperedge)
* matrix: ``p matrix <r> <c>`` then ``r`` rows of ``c`` space-separated bits
* table:  ``p table <n>`` then ``2^n`` integers; the value for subset ``X``
  sits at index ``sum(2^i for i in X)``
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import ConnectivityOracle, ValidationError, members
from .matroid import GF2Matroid, GraphicMatroid, LambdaOracle, gf2_rank


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for e in self.edges:
            if not e or any(not 0 <= v < self.n for v in e):
                raise ValidationError(f"edge {e} has an endpoint out of range")

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, tuple((i, i + 1) for i in range(n - 1)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        """Center is vertex 0."""
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))

    def is_simple(self) -> bool:
        seen = set()
        for e in self.edges:
            if len(e) != 2 or e[0] == e[1]:
                return False
            key = frozenset(e)
            if key in seen:
                return False
            seen.add(key)
        return True


def carving_oracle(g: Graph) -> ConnectivityOracle:
    """Number of edges leaving ``X`` (ground set: vertices)."""
    for e in g.edges:
        if len(e) != 2:
            raise ValidationError("carving-width needs ordinary edges")
        if e[0] == e[1]:
            raise ValidationError("loops are not allowed for carving-width")
    ends = [(1 << a, 1 << b) for a, b in g.edges]

    def f(x):
        return sum(1 for a, b in ends if bool(x & a) != bool(x & b))

    return ConnectivityOracle(g.n, f, name="carving")


def graph_branchwidth_oracle(g: Graph) -> ConnectivityOracle:
    """Number of vertices meeting both ``X`` and its complement (ground set:
    edges, or hyperedges)."""
    inc = [0] * g.n
    for j, e in enumerate(g.edges):
        for v in set(e):
            inc[v] |= 1 << j
    inc = [m for m in inc if m]
    full = (1 << len(g.edges)) - 1

    def f(x):
        y = full ^ x
        return sum(1 for m in inc if m & x and m & y)

    return ConnectivityOracle(len(g.edges), f, name="branchwidth")


def adjacency_masks(g: Graph) -> list[int]:
    adj = [0] * g.n
    for a, b in g.edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    return adj


def cut_rank_oracle(g: Graph) -> ConnectivityOracle:
    """GF(2) rank of the ``X x (V - X)`` adjacency submatrix."""
    if not g.is_simple():
        raise ValidationError("cut-rank needs a simple graph")
    adj = adjacency_masks(g)
    full = (1 << g.n) - 1

    def f(x):
        y = full ^ x
        return gf2_rank([adj[v] & y for v in members(x)])

    return ConnectivityOracle(g.n, f, name="cutrank")


def matroid_lambda_oracle(m) -> LambdaOracle:
    return LambdaOracle(m)


class TableOracle(ConnectivityOracle):
    def __init__(self, values, name: str = "table", validate: bool = True):
        values = [int(v) for v in values]
        n = len(values).bit_length() - 1
        if n > 16 or len(values) != 1 << n:
            raise ValidationError("table must list 2^n values with n <= 16")
        if validate:
            validate_table(values)
        super().__init__(n, values.__getitem__, name=name)
        self.values = values


def validate_table(values: list[int]) -> None:
    """Full check of the connectivity-function axioms.

    Submodularity is checked through the equivalent local condition
    ``f(X+a) + f(X+b) >= f(X) + f(X+a+b)``; a violation names the pair
    ``(X+a, X+b)``.
    """
    v = np.asarray(values, dtype=np.int64)
    n = len(values).bit_length() - 1
    full = (1 << n) - 1
    idx = np.arange(1 << n)
    if v[0] != 0:
        raise ValidationError("f(empty) must be 0")
    bad = np.nonzero(v != v[full ^ idx])[0]
    if bad.size:
        raise ValidationError(f"symmetry fails at X={members(int(bad[0]))}")
    for a in range(n):
        for b in range(a + 1, n):
            ba, bb = 1 << a, 1 << b
            x = idx[(idx & (ba | bb)) == 0]
            lhs = v[x | ba] + v[x | bb]
            rhs = v[x] + v[x | ba | bb]
            bad = np.nonzero(lhs < rhs)[0]
            if bad.size:
                x0 = int(x[bad[0]])
                raise ValidationError(
                    f"submodularity fails for X={members(x0 | ba)}, Y={members(x0 | bb)}")


# --------------------------------------------------------------------------
# parsers


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield no, line.split()


def _header(lines, kind: str, nargs: int):
    try:
        no, tok = next(lines)
    except StopIteration:
        raise ValidationError("empty input") from None
    if len(tok) != 2 + nargs or tok[0] != "p" or tok[1] != kind:
        raise ValidationError(f"line {no}: expected 'p {kind}' header with {nargs} numbers")
    try:
        return [int(t) for t in tok[2:]]
    except ValueError:
        raise ValidationError(f"line {no}: non-integer in header") from None


def parse_graph(text: str) -> Graph:
    lines = _lines(text)
    n, m = _header(lines, "graph", 2)
    edges = []
    for no, tok in lines:
        if tok[0] != "e" or len(tok) < 2:
            raise ValidationError(f"line {no}: expected 'e <u> <v> ...'")
        try:
            ends = tuple(int(t) - 1 for t in tok[1:])
        except ValueError:
            raise ValidationError(f"line {no}: non-integer vertex") from None
        if any(not 0 <= v < n for v in ends):
            raise ValidationError(f"line {no}: vertex out of range 1..{n}")
        edges.append(ends)
    if len(edges) != m:
        raise ValidationError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def parse_matrix(text: str) -> GF2Matroid:
    lines = _lines(text)
    r, c = _header(lines, "matrix", 2)
    rows = []
    for no, tok in lines:
        if len(tok) != c or any(t not in ("0", "1") for t in tok):
            raise ValidationError(f"line {no}: expected {c} bits")
        rows.append([int(t) for t in tok])
    if len(rows) != r:
        raise ValidationError(f"header announces {r} rows, found {len(rows)}")
    if r == 0:
        return GF2Matroid([0] * c)
    return GF2Matroid.from_rows(rows)


def parse_table(text: str, validate: bool = True) -> TableOracle:
    lines = _lines(text)
    (n,) = _header(lines, "table", 1)
    if not 0 <= n <= 16:
        raise ValidationError("table size must be between 0 and 16")
    values = []
    for no, tok in lines:
        try:
            values.extend(int(t) for t in tok)
        except ValueError:
            raise ValidationError(f"line {no}: non-integer value") from None
    if len(values) != 1 << n:
        raise ValidationError(f"expected {1 << n} values, found {len(values)}")
    return TableOracle(values, validate=validate)


KINDS = ("carving", "branchwidth", "rankwidth", "matroid-gf2", "matroid-graphic", "table")


def load_instance(kind: str, path) -> ConnectivityOracle:
    text = Path(path).read_text()
    if kind == "carving":
        return carving_oracle(parse_graph(text))
    if kind == "branchwidth":
        return graph_branchwidth_oracle(parse_graph(text))
    if kind == "rankwidth":
        return cut_rank_oracle(parse_graph(text))
    if kind == "matroid-gf2":
        return LambdaOracle(parse_matrix(text))
    if kind == "matroid-graphic":
        g = parse_graph(text)
        if any(len(e) != 2 for e in g.edges):
            raise ValidationError("graphic matroid needs ordinary edges")
        return LambdaOracle(GraphicMatroid(g.n, list(g.edges)))
    if kind == "table":
        return parse_table(text)
    raise ValidationError(f"unknown instance kind {kind!r}")


def format_graph(g: Graph) -> str:
    out = [f"p graph {g.n} {len(g.edges)}"]
    out += ["e " + " ".join(str(v + 1) for v in e) for e in g.edges]
    return "\n".join(out) + "\n"


def format_table(values) -> str:
    n = len(values).bit_length() - 1
    return f"p table {n}\n" + " ".join(str(int(v)) for v in values) + "\n"


def format_matrix(rows) -> str:
    r = len(rows)
    c = len(rows[0]) if rows else 0
    return f"p matrix {r} {c}\n" + "".join(" ".join(str(b) for b in row) + "\n" for row in rows)


__all__ = [
    "Graph", "carving_oracle", "graph_branchwidth_oracle", "cut_rank_oracle", "matroid_lambda_oracle",
    "TableOracle", "validate_table", "parse_graph", "parse_matrix", "parse_table", "load_instance",
    "KINDS",
]
