"""Titanic-set testing through the polymatroid induced on a set.

For a proper subset ``A`` the function ``g(X) = min f(Z), X <= Z <= A`` is a
polymatroid on ``A``. ``A`` fails to be titanic exactly when ``A`` can be
covered by three sets of ``g``-rank below ``g(A) = f(A)``; such a cover is
found by a bounded three-way branching over flats and then uncrossed into a
tripartition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import ConnectivityOracle, InvariantError, Tripartition, UsageError, lowest, members
from .sfm import interpolation_fmin


@dataclass
class InducedPolymatroid:
    oracle: ConnectivityOracle
    carrier: int
    memo: dict[int, int] = field(default_factory=dict)

    def rank(self, x: int) -> int:
        v = self.memo.get(x)
        if v is None:
            if x & ~self.carrier:
                raise UsageError("set is not inside the carrier")
            v = interpolation_fmin(self.oracle, x, self.oracle.full ^ self.carrier)
            self.memo[x] = v
        return v

    __call__ = rank

    @property
    def top(self) -> int:
        return self.rank(self.carrier)


def closure(p: InducedPolymatroid, x: int) -> int:
    """Largest superset of ``x`` inside the carrier with the same rank.

    One ascending pass is enough: a zero marginal stays zero as the set
    grows, by submodularity.
    """
    r = p.rank(x)
    cur = x
    for a in members(p.carrier & ~x):
        bit = 1 << a
        if p.rank(cur | bit) == r:
            cur |= bit
    return cur


@dataclass
class CoverSearch:
    """Three-flat cover search; ``nodes`` counts recursion nodes visited."""

    p: InducedPolymatroid
    prune_visited: bool = False
    nodes: int = 0
    _seen: set = field(default_factory=set)
    _bottom: int = 0

    def run(self) -> tuple[int, int, int] | None:
        top = self.p.top
        if top == 0:
            return None
        self._bottom = closure(self.p, 0)
        return self._rec(0, 0, 0, top)

    def _rec(self, x: int, y: int, z: int, top: int):
        self.nodes += 1
        p = self.p
        parts = []
        for s in (x, y, z):
            c = closure(p, s)
            if p.rank(c) >= top:
                return None
            parts.append(c)
        x, y, z = parts
        if self.prune_visited:
            key = tuple(sorted(parts))
            if key in self._seen:
                return None
            self._seen.add(key)
        uncovered = p.carrier & ~(x | y | z)
        if not uncovered:
            return x, y, z
        v = 1 << lowest(uncovered)
        # identical parts are interchangeable, so each distinct part is tried
        # once; parts still equal to the bottom flat go first
        bottom = self._bottom
        slots = [i for i, s in enumerate(parts) if s not in parts[:i]]
        slots.sort(key=lambda i: parts[i] != bottom)
        for i in slots:
            trial = list(parts)
            trial[i] |= v
            found = self._rec(*trial, top)
            if found is not None:
                return found
        return None


def cover_by_three_flats(p: InducedPolymatroid, prune_visited: bool = False) -> tuple[int, int, int] | None:
    if not p.carrier:
        raise UsageError("carrier must be nonempty")
    return CoverSearch(p, prune_visited).run()


def uncross_cover(f: ConnectivityOracle, a: int, c1: int, c2: int, c3: int, check: bool = False) -> Tripartition:
    """Turn a cover of ``a`` by three sets of value below ``f(a)`` into a
    tripartition with the same property, using at most three evaluations
    beyond the inputs. ``check`` re-evaluates the final parts."""
    fa = f(a)
    cs = [c1, c2, c3]
    if (c1 | c2 | c3) != a or any(f(c) >= fa for c in cs):
        raise UsageError("uncross_cover needs a cover of A by sets of value below f(A)")
    for i, j in ((0, 1), (1, 2), (2, 0)):
        if cs[i] & cs[j]:
            d = cs[i] & ~cs[j]
            if f(d) < fa:
                cs[i] = d
            else:
                cs[j] = cs[j] & ~cs[i]
    t = Tripartition(tuple(cs))
    if not t.is_partition_of(a) or (check and any(f(c) >= fa for c in cs)):
        raise InvariantError("uncrossing produced an invalid tripartition")
    return t


@dataclass(frozen=True)
class TitanicResult:
    titanic: bool
    witness: Tripartition | None = None


def titanic_test(f: ConnectivityOracle, a: int, prune_visited: bool = False) -> TitanicResult:
    """Decide whether ``a`` is titanic; otherwise return a tripartition of
    ``a`` whose three parts all have value strictly below ``f(a)``."""
    if a == 0 or a == f.full or a & ~f.full:
        raise UsageError("titanic test needs a proper nonempty subset")
    if f(a) == 0:
        return TitanicResult(True)
    p = InducedPolymatroid(f, a)
    cover = cover_by_three_flats(p, prune_visited)
    if cover is None:
        return TitanicResult(True)
    flats = [closure(p, c) for c in cover]
    for fl in flats:
        if f(fl) != p.rank(fl):
            raise InvariantError("flat value differs from its polymatroid rank")
    return TitanicResult(False, uncross_cover(f, a, *flats, check=True))
