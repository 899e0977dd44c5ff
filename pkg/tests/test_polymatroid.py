from __future__ import annotations

from dataclasses import dataclass

import pytest
from hypothesis import given, strategies as st

from branchdec.core import UsageError, members, popcount
from branchdec.matroid import gf2_rank
from branchdec.polymatroid import (
    InducedPolymatroid,
    closure,
    cover_by_three_flats,
    titanic_test,
    uncross_cover,
)
from branchdec.testkit import INSTANCE_KINDS, brute_constrained_min, brute_titanic, random_instance


@dataclass
class Gf2Poly:
    """Column-rank polymatroid on a few GF(2) vectors, standing in for g."""

    vectors: tuple[int, ...]

    @property
    def carrier(self):
        return (1 << len(self.vectors)) - 1

    def rank(self, x):
        return gf2_rank([self.vectors[i] for i in members(x)])

    @property
    def top(self):
        return self.rank(self.carrier)


ABC = Gf2Poly((0b01, 0b10, 0b11))


def test_closure_of_single_vector():
    assert closure(ABC, 0b001) == 0b001


def test_closure_of_spanning_set():
    assert closure(ABC, 0b011) == ABC.carrier


def test_closure_of_empty_without_loops():
    assert closure(ABC, 0) == 0


def test_three_rank_one_flats():
    assert cover_by_three_flats(ABC) == (0b001, 0b010, 0b100)


def test_rank_zero_has_no_cover():
    assert cover_by_three_flats(Gf2Poly((0, 0))) is None


def test_star_leaves_cover(k13):
    p = InducedPolymatroid(k13, 0b1110)
    assert p.top == 3
    assert [p(1 << i) for i in (1, 2, 3)] == [1, 1, 1]
    assert [p(m) for m in (0b0110, 0b1010, 0b1100)] == [2, 2, 2]
    cover = cover_by_three_flats(p)
    assert cover is not None
    assert cover[0] | cover[1] | cover[2] == 0b1110
    assert all(p(c) < 3 for c in cover)


def test_uncross_star(k13):
    t = uncross_cover(k13, 0b1110, 0b0110, 0b1100, 0b1010)
    assert t.parts == (0b0010, 0b0100, 0b1000)


def test_uncross_disjoint_unchanged(k13):
    t = uncross_cover(k13, 0b1110, 0b0010, 0b0100, 0b1000)
    assert t.parts == (0b0010, 0b0100, 0b1000)


def test_uncross_rejects_non_cover(k13):
    with pytest.raises(UsageError):
        uncross_cover(k13, 0b1110, 0b0010, 0b0100, 0b0100)


def test_uncross_evaluation_budget(k13):
    a, cs = 0b1110, (0b0110, 0b1100, 0b1010)
    for s in (a,) + cs:
        k13(s)
    before = k13.queries
    uncross_cover(k13, a, *cs)
    assert k13.queries - before <= 3


def test_c4_adjacent_pair_is_titanic(c4):
    assert titanic_test(c4, 0b0011).titanic


def test_star_leaves_not_titanic(k13):
    res = titanic_test(k13, 0b1110)
    assert not res.titanic
    assert res.witness.parts == (0b0010, 0b0100, 0b1000)
    assert [k13(p) for p in res.witness.parts] == [1, 1, 1]


def test_zero_value_is_titanic():
    f = random_instance(0, "carving", 4)
    f2 = type(f)(4, lambda x: 0)
    assert titanic_test(f2, 0b0011).titanic


def test_singleton_is_titanic(c4):
    assert titanic_test(c4, 0b0100).titanic


def test_improper_set_rejected(c4):
    with pytest.raises(UsageError):
        titanic_test(c4, 0)
    with pytest.raises(UsageError):
        titanic_test(c4, c4.full)


cases = st.tuples(st.integers(0, 10_000), st.sampled_from(INSTANCE_KINDS), st.integers(3, 10), st.integers(1, 1 << 30))


@given(cases)
def test_rank_matches_brute(case):
    seed, kind, n, a = case
    f = random_instance(seed, kind, n)
    a &= f.full
    if a in (0, f.full):
        a = 1
    p = InducedPolymatroid(f, a)
    for x in range(0, 1 << n, max(1, (1 << n) // 40)):
        x &= a
        assert p(x) == brute_constrained_min(f, x, f.full ^ a)[0]


@given(cases)
def test_closure_is_flat(case):
    seed, kind, n, a = case
    f = random_instance(seed, kind, n)
    a &= f.full
    if a in (0, f.full):
        a = 1
    p = InducedPolymatroid(f, a)
    x = (seed * 2654435761) & a
    fl = closure(p, x)
    assert fl & x == x and not fl & ~a
    assert p(fl) == p(x)
    for e in members(a & ~fl):
        assert p(fl | 1 << e) > p(fl)


@given(cases)
def test_titanic_matches_brute(case):
    seed, kind, n, a = case
    f = random_instance(seed, kind, n)
    a &= f.full
    if a in (0, f.full):
        a = 1
    res = titanic_test(f, a)
    assert res.titanic == (brute_titanic(f, a) is None)
    if not res.titanic:
        assert res.witness.is_partition_of(a)
        assert all(f(p) < f(a) for p in res.witness.parts)


@given(cases)
def test_visited_pruning_same_answer(case):
    seed, kind, n, a = case
    f = random_instance(seed, kind, n)
    a &= f.full
    if a in (0, f.full) or popcount(a) < 2:
        a = 0b11
    assert titanic_test(f, a).titanic == titanic_test(f, a, prune_visited=True).titanic
