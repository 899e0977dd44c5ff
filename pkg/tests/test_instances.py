from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from branchdec.core import ValidationError, check_connectivity_sampled
from branchdec.instances import (
    Graph,
    TableOracle,
    carving_oracle,
    cut_rank_oracle,
    format_graph,
    format_matrix,
    format_table,
    graph_branchwidth_oracle,
    load_instance,
    parse_graph,
    parse_matrix,
    parse_table,
    validate_table,
)
from branchdec.testkit import random_graph, random_table

C4_TEXT = "p graph 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n"


def test_carving_values(c4, k13):
    assert c4(0b0001) == 2
    assert k13(0b1110) == 3
    assert c4(0) == 0


def test_carving_rejects_loops():
    with pytest.raises(ValidationError):
        carving_oracle(Graph(2, ((0, 0),)))


def test_branchwidth_values():
    f = graph_branchwidth_oracle(Graph.complete(3))
    assert f(0b001) == 2
    assert f(f.full) == 0


def test_branchwidth_hyperedge():
    f = graph_branchwidth_oracle(Graph(4, ((0, 1, 2), (2, 3))))
    assert f(0b01) == 1


def test_cut_rank_values():
    p3 = cut_rank_oracle(Graph.path(3))
    assert p3(0b010) == 1
    k5 = cut_rank_oracle(Graph.complete(5))
    assert all(k5(x) == 1 for x in range(1, 31))


def _dense_rank(rows):
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


@given(st.integers(0, 10_000), st.integers(2, 10), st.integers(0, 1 << 10))
def test_cut_rank_matches_dense_elimination(seed, n, x):
    g = random_graph(seed, n)
    f = cut_rank_oracle(g)
    x &= f.full
    adj = {(a, b) for a, b in g.edges} | {(b, a) for a, b in g.edges}
    xs = [v for v in range(n) if x >> v & 1]
    ys = [v for v in range(n) if not x >> v & 1]
    matrix = [[int((u, w) in adj) for w in ys] for u in xs]
    assert f(x) == _dense_rank(matrix)


@pytest.mark.parametrize("make", [
    lambda s: carving_oracle(random_graph(s, 8)),
    lambda s: graph_branchwidth_oracle(random_graph(s, 6)),
    lambda s: cut_rank_oracle(random_graph(s, 9)),
    lambda s: random_table(s, 6),
])
def test_shipped_oracles_pass_sampled_checks(make):
    for seed in range(3):
        check_connectivity_sampled(make(seed), 1000, random.Random(seed))


def test_parse_graph_c4(c4):
    g = parse_graph(C4_TEXT)
    assert g == Graph(4, ((0, 1), (1, 2), (2, 3), (3, 0)))
    f = carving_oracle(g)
    assert all(f(x) == c4(x) for x in range(16))


def test_parse_graph_comments_and_roundtrip():
    g = parse_graph("c a comment\n" + C4_TEXT)
    assert parse_graph(format_graph(g)) == g


def test_parse_graph_errors_carry_line_numbers():
    with pytest.raises(ValidationError, match="line 3"):
        parse_graph("p graph 3 2\ne 1 2\ne 1 9\n")
    with pytest.raises(ValidationError, match="header"):
        parse_graph("p graph 3\n")
    with pytest.raises(ValidationError, match="announces"):
        parse_graph("p graph 3 2\ne 1 2\n")


def test_parse_matrix():
    m = parse_matrix("p matrix 2 4\n1 0 1 1\n0 1 1 0\n")
    assert m.n == 4
    assert m.rank(m.full) == 2
    assert parse_matrix(format_matrix([[1, 0, 1, 1], [0, 1, 1, 0]])).columns == m.columns


def test_parse_matrix_bad_row():
    with pytest.raises(ValidationError, match="line 2"):
        parse_matrix("p matrix 2 3\n1 0\n0 1 1\n")


def test_smallest_table():
    f = parse_table("p table 2\n0 1 1 0\n")
    assert [f(x) for x in range(4)] == [0, 1, 1, 0]


def test_table_roundtrip():
    t = random_table(4, 5)
    assert parse_table(format_table(t.values)).values == t.values


def test_table_rejects_non_submodular():
    # symmetric, but f({0}) + f({1}) = 2 < 3 = f({}) + f({0,1})
    values = [0, 1, 1, 3, 3, 1, 1, 0]
    with pytest.raises(ValidationError, match="submodularity fails for X=.*Y="):
        validate_table(values)


def test_table_rejects_asymmetry():
    with pytest.raises(ValidationError, match="symmetry"):
        TableOracle([0, 1, 2, 0])


def test_load_instance(tmp_path):
    p = tmp_path / "c4.g"
    p.write_text(C4_TEXT)
    assert load_instance("carving", p).n == 4
    assert load_instance("branchwidth", p).n == 4
    assert load_instance("matroid-graphic", p).n == 4
    with pytest.raises(ValidationError):
        load_instance("nonsense", p)


@given(st.integers(0, 10_000), st.integers(1, 7))
def test_generated_tables_validate(seed, n):
    validate_table(random_table(seed, n).values)
