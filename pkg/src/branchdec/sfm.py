"""Constrained minimisation of connectivity functions.

``minimize_constrained(f, X, Y)`` finds ``Z`` with ``X <= Z <= V - Y``
minimising ``f(Z)``. Small free sets are enumerated; larger ones go through
the Fujishige-Wolfe minimum-norm-point method, whose answer is accepted only
when the integrality gap certifies it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BranchDecError, ConnectivityOracle, UsageError


class UnresolvedMinimization(BranchDecError):
    """The min-norm-point answer could not be certified and the free set is
    too large to enumerate."""


@dataclass(frozen=True)
class MinResult:
    minimizer: int
    value: int


def tie_break_minimizer(candidates) -> int:
    """Smallest bit vector (as an integer) among equally good minimisers."""
    return min(candidates)


class Minimizer:
    """Strategy object for constrained minimisation over "units".

    A unit is a nonempty mask of base elements that is either taken whole or
    not at all. ``strategy`` is one of ``"auto"``, ``"enumerate"``, ``"mnp"``.
    """

    def __init__(self, strategy: str = "auto", threshold: int = 12, capacity: int = 24,
                 tol: float = 1e-9, gap_slack: float = 1e-6, max_iter: int = 10_000):
        if strategy not in ("auto", "enumerate", "mnp"):
            raise UsageError(f"unknown sfm strategy {strategy!r}")
        self.strategy = strategy
        self.threshold = threshold
        self.capacity = capacity
        self.tol = tol
        self.gap_slack = gap_slack
        self.max_iter = max_iter
        self.stats = {"enumerations": 0, "mnp_runs": 0, "mnp_certified": 0, "mnp_fallbacks": 0}

    # -- entry point used by minimize_constrained -------------------------

    def minimize_units(self, base: ConnectivityOracle, base_in: int, units: list[int], history=()) -> tuple[int, int]:
        """Return ``(value, chosen)`` where ``chosen`` is a bit mask over
        ``units`` (bit ``i`` <-> ``units[i]``)."""
        u = len(units)
        if u == 0:
            return base(base_in), 0
        use_enum = self.strategy == "enumerate" or (self.strategy == "auto" and u <= self.threshold)
        if use_enum:
            return self.enumerate(base, base_in, units)
        res = self.min_norm_point(base, base_in, units)
        if res is not None:
            return res
        self.stats["mnp_fallbacks"] += 1
        return self.enumerate(base, base_in, units)

    def enumerate(self, base, base_in, units) -> tuple[int, int]:
        u = len(units)
        if u > self.capacity:
            raise UnresolvedMinimization(
                f"cannot certify minimiser over {u} free units (enumeration capacity {self.capacity})")
        self.stats["enumerations"] += 1
        best_val = base(base_in)
        best = 0
        unions = [base_in] * (1 << u)
        for s in range(1, 1 << u):
            low = s & -s
            z = unions[s ^ low] | units[low.bit_length() - 1]
            unions[s] = z
            v = base(z)
            if v < best_val:
                best_val, best = v, s
        return best_val, best

    # -- Fujishige-Wolfe --------------------------------------------------

    def min_norm_point(self, base, base_in, units) -> tuple[int, int] | None:
        """Min-norm point in the base polytope of ``h(S) - h(0)``.

        Returns ``None`` when the gap between the best level set and the
        lower bound ``sum(min(x_i, 0))`` never drops below one.
        """
        self.stats["mnp_runs"] += 1
        u = len(units)
        h0 = base(base_in)
        tol = self.tol
        bound = 1.0 - self.gap_slack

        def greedy(w):
            order = np.argsort(w, kind="stable")
            q = np.empty(u)
            z, prev = base_in, h0
            best_val, best = h0, 0
            mask = 0
            for i in order:
                z |= units[i]
                mask |= 1 << int(i)
                v = base(z)
                q[i] = v - prev
                prev = v
                if v < best_val or (v == best_val and mask < best):
                    best_val, best = v, mask
            return q, best_val, best

        x, best_val, best = greedy(np.zeros(u))
        corral = [x]
        lam = np.array([1.0])
        for _ in range(self.max_iter):
            q, val, cand = greedy(x)
            if val < best_val or (val == best_val and cand < best):
                best_val, best = val, cand
            lower = h0 + np.minimum(x, 0.0).sum()
            if best_val - lower < bound:
                self.stats["mnp_certified"] += 1
                return best_val, best
            xx = float(x @ x)
            if xx - float(x @ q) <= tol * max(1.0, xx, float(q @ q)):
                break
            if any(np.allclose(q, p, atol=tol) for p in corral):
                break
            corral.append(q)
            lam = np.append(lam, 0.0)
            # minor cycles
            while True:
                alpha, y = _affine_minimizer(np.array(corral))
                if np.all(alpha > tol):
                    x, lam = y, alpha
                    break
                idx = alpha < lam - tol
                if not np.any(idx):
                    x, lam = y, np.clip(alpha, 0.0, None)
                    lam = lam / lam.sum()
                    break
                theta = float(np.min(lam[idx] / (lam[idx] - alpha[idx])))
                theta = min(max(theta, 0.0), 1.0)
                lam = (1 - theta) * lam + theta * alpha
                keep = lam > tol
                corral = [p for p, k in zip(corral, keep) if k]
                lam = lam[keep]
                lam = lam / lam.sum()
                x = lam @ np.array(corral)
                if len(corral) == 1:
                    break
        lower = h0 + np.minimum(x, 0.0).sum()
        if best_val - lower < bound:
            self.stats["mnp_certified"] += 1
            return best_val, best
        return None


def _affine_minimizer(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Min-norm point of the affine hull of the rows of ``points``."""
    m = points.shape[0]
    gram = points @ points.T
    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, :m] = gram
    kkt[:m, m] = 1.0
    kkt[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    alpha = sol[:m]
    return alpha, alpha @ points


DEFAULT_MINIMIZER = Minimizer()


def minimizer_for(oracle: ConnectivityOracle) -> Minimizer:
    return oracle.minimizer if oracle.minimizer is not None else DEFAULT_MINIMIZER


def minimize_constrained(oracle: ConnectivityOracle, forced_in: int, forced_out: int,
                         minimizer: Minimizer | None = None) -> MinResult:
    """Minimise ``oracle`` over ``forced_in <= Z <= V - forced_out``."""
    if forced_in & forced_out:
        raise UsageError("forced-in and forced-out sets intersect")
    oracle.ground.check(forced_in)
    oracle.ground.check(forced_out)
    minimizer = minimizer or minimizer_for(oracle)
    base, base_in, units, local_units, history = oracle.lift(forced_in, forced_out)
    value, chosen = minimizer.minimize_units(base, base_in, units, history)
    z = forced_in
    i = 0
    while chosen:
        if chosen & 1:
            z |= local_units[i]
        chosen >>= 1
        i += 1
    return MinResult(z, value)


def interpolation_fmin(oracle: ConnectivityOracle, x: int, y: int) -> int:
    """``min f(Z)`` over ``x <= Z <= V - y``, memoised per oracle."""
    memo = oracle.__dict__.setdefault("_fmin_memo", {})
    key = (x, y)
    v = memo.get(key)
    if v is None:
        if x | y == oracle.full:
            v = oracle(x)
        else:
            v = minimize_constrained(oracle, x, y).value
        memo[key] = v
    return v
