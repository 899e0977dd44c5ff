"""Finding a cut whose two sides are both titanic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import BranchDecomposition, ConnectivityOracle, Cut, InvariantError, UsageError, popcount
from .polymatroid import titanic_test


def balanced_start_cut(dec: BranchDecomposition, f: ConnectivityOracle | None = None) -> Cut:
    """Edge cut maximising the smaller side; ties go to the smallest edge.

    Every subcubic tree has an edge whose smaller side holds at least a third
    of the leaves. The value is filled in only when ``f`` is given.
    """
    n = dec.n_elements
    if n < 3:
        raise UsageError("balanced cut needs at least three elements")
    sides = dec.side_masks()
    best = None
    for u, v in dec.edges():
        s = sides[(u, v)]
        size = min(popcount(s), n - popcount(s))
        if best is None or size > best[0]:
            best = (size, s)
    size, side = best
    if size < math.ceil(n / 3):
        raise InvariantError(f"no edge with both sides >= n/3 (best {size} of {n})")
    return Cut(side, f(side) if f is not None else -1)


@dataclass
class SplitTrace:
    """Cut values and sizes seen while refining, for checks and reporting."""

    values: list[int] = field(default_factory=list)
    sides: list[int] = field(default_factory=list)
    titanic_tests: int = 0


def _largest_part(parts) -> int:
    return min(parts, key=lambda p: (-popcount(p), p))


def titanic_split(f: ConnectivityOracle, dec: BranchDecomposition, width: int | None = None,
                  trace: SplitTrace | None = None) -> Cut:
    """Cut ``(A, V - A)`` with both sides titanic.

    Starts from the balanced edge cut of ``dec`` and replaces a non-titanic
    side by the largest part of its witness tripartition; every step lowers
    the cut value, so there are at most ``f(A_0)`` steps. When both sides
    fail, the larger side is refined (ties: the side holding element 0).
    """
    n = f.n
    if n < 3:
        raise UsageError("titanic split needs at least three elements")
    trace = trace if trace is not None else SplitTrace()
    start = balanced_start_cut(dec, f)
    side = start.side
    full = f.full
    while True:
        value = f(side)
        if trace.values and value >= trace.values[-1]:
            raise InvariantError("cut value did not decrease during refinement")
        trace.values.append(value)
        trace.sides.append(side)
        other = full ^ side
        res_a = titanic_test(f, side)
        res_b = titanic_test(f, other)
        trace.titanic_tests += 2
        if res_a.titanic and res_b.titanic:
            break
        if res_a.titanic:
            witness = res_b.witness
        elif res_b.titanic:
            witness = res_a.witness
        else:
            pa, pb = popcount(side), popcount(other)
            if pa > pb or (pa == pb and side & 1):
                witness = res_a.witness
            else:
                witness = res_b.witness
        side = _largest_part(witness.parts)
    if width is not None:
        bound = n / 3 ** (width + 1)
        if min(popcount(side), n - popcount(side)) < bound:
            raise InvariantError("titanic split violated the size bound")
        if len(trace.values) > width + 1:
            raise InvariantError("titanic split took more rounds than the width allows")
    return Cut(side, f(side))
