"""Brute-force reference solvers.

These deliberately share nothing with the Gröbner / cut machinery: they walk
the budget simplex (or a fiber) point by point.  They exist to check the
main solver on instances small enough to enumerate.
"""

import time
from dataclasses import dataclass

import numpy as np

from .errors import TooLarge


@dataclass(frozen=True)
class EnumerationBudget:
    max_points: int = 20_000_000
    max_seconds: float = 120.0

    def __post_init__(self):
        if self.max_points <= 0 or self.max_seconds <= 0:
            raise ValueError("enumeration caps must be positive")


def _box_size(a, B):
    size = 1
    for p in a:
        size *= B // int(p) + 1
    return size


class _Clock:
    def __init__(self, budget):
        self.budget = budget
        self.start = time.monotonic()
        self.ticks = 0

    def tick(self, k=1):
        self.ticks += k
        if self.ticks > self.budget.max_points:
            raise TooLarge(f"enumerated more than {self.budget.max_points} points")
        if self.ticks % 4096 == 0 and time.monotonic() - self.start > self.budget.max_seconds:
            raise TooLarge(f"enumeration exceeded {self.budget.max_seconds} s")


def brute_force_optimum(inst, budget: EnumerationBudget = EnumerationBudget()):
    """Exhaustive maximum-return portfolio.

    Returns ``(x, return, enumerated)``.  Among equal returns the
    lexicographically smallest x wins.  The asset with the most room under
    the budget is scanned as a vector for speed; the others are walked
    depth-first with the remaining budget carried along.
    """
    n = inst.n
    a0 = [int(v) for v in inst.a]
    mu0 = [int(v) for v in inst.mu]
    B = int(inst.B)
    if _box_size(a0, B) > budget.max_points:
        raise TooLarge(f"box of {_box_size(a0, B)} points exceeds cap {budget.max_points}")
    # walk order: the widest coordinate goes last
    last_asset = max(range(n), key=lambda j: (B // a0[j], j))
    perm = [j for j in range(n) if j != last_asset] + [last_asset]
    a = [a0[j] for j in perm]
    mu = [mu0[j] for j in perm]
    # independent risk evaluation: (a*x)^T Omega (a*x)
    omega = np.asarray(inst.omega, dtype=float)[np.ix_(perm, perm)]
    af = np.array(a, dtype=float)
    cap = float(B) ** 2 * float(inst.r0_sq)
    clock = _Clock(budget)

    def original(y):
        out = [0] * n
        for pos, j in enumerate(perm):
            out[j] = int(y[pos])
        return tuple(out)

    best_x = tuple([0] * n)
    best_ret = 0
    x = [0] * n
    last = n - 1

    def visit(j, remaining):
        nonlocal best_x, best_ret
        if j == last:
            t = np.arange(remaining // a[last] + 1)
            clock.tick(t.size)
            w = np.tile(af * np.array(x, dtype=float), (t.size, 1))
            w[:, last] = af[last] * t
            risk = np.einsum("ij,jk,ik->i", w, omega, w)
            ok = np.flatnonzero(risk <= cap)
            if ok.size == 0:
                return
            base = sum(mu[i] * x[i] for i in range(last))
            # return is non-decreasing in t; the best t is the largest
            # feasible one, or the smallest when mu_last == 0 (lex tie-break)
            tt = int(t[ok[-1]]) if mu[last] > 0 else int(t[ok[0]])
            ret = base + mu[last] * tt
            cand = original(x[:last] + [tt])
            if ret > best_ret or (ret == best_ret and cand < best_x):
                best_ret, best_x = ret, cand
            return
        for v in range(remaining // a[j] + 1):
            x[j] = v
            visit(j + 1, remaining - a[j] * v)
        x[j] = 0

    visit(0, B)
    return best_x, int(best_ret), clock.ticks


def _order_key(p, cost, perm, graded):
    # minimum of this key = minimum of the cost-compatible term order:
    # highest cost, then (if graded) lowest degree, then largest value at the
    # last differing variable in ``perm`` (reverse lexicographic)
    return (-sum(c * v for c, v in zip(cost, p)), sum(p) if graded else 0,
            tuple(-p[i] for i in reversed(perm)))


def brute_force_fiber_optimum(sys, point, budget: EnumerationBudget = EnumerationBudget(),
                              tie_break: str = "revlex"):
    """Term-order minimum of the fiber ``{y >= 0 : A y = A point}``.

    ``sys`` is a ``testset.SlackSystem``; its first row has positive
    coefficients and bounds the enumeration of the structural part, the
    slacks are then determined.  ``tie_break`` is ``"revlex"`` (variables
    scanned from ``x1`` last) or ``"grevlex"`` (degree first, natural order).
    """
    n, m = sys.n_free, sys.m
    A0 = [[int(c) for c in row] for row in sys.A0]
    p = [int(v) for v in point]
    if len(p) != n + m:
        raise ValueError("point has the wrong length")
    t = [sum(A0[k][j] * p[j] for j in range(n)) + p[n + k] for k in range(m)]
    first = A0[0]
    if any(c <= 0 for c in first):
        raise ValueError("first row must have positive coefficients")
    if _box_size(first, t[0]) > budget.max_points:
        raise TooLarge("fiber too large to enumerate")
    cost = tuple(sys.mu_free) + (0,) * m
    if tie_break == "revlex":
        perm, graded = tuple(range(n + m))[::-1], False
    elif tie_break == "grevlex":
        perm, graded = tuple(range(n + m)), True
    else:
        raise ValueError(f"unknown tie-break {tie_break!r}")
    clock = _Clock(budget)
    best, best_key = None, None
    y = [0] * n

    def visit(j, remaining):
        nonlocal best, best_key
        if j == n:
            clock.tick()
            z = [t[k] - sum(A0[k][i] * y[i] for i in range(n)) for k in range(m)]
            if min(z, default=0) < 0:
                return
            cand = tuple(y) + tuple(z)
            key = _order_key(cand, cost, perm, graded)
            if best_key is None or key < best_key:
                best, best_key = cand, key
            return
        for v in range(remaining // first[j] + 1):
            y[j] = v
            visit(j + 1, remaining - first[j] * v)
        y[j] = 0

    visit(0, t[0])
    return best


def fiber_points(sys, point, budget: EnumerationBudget = EnumerationBudget()):
    """All points of the fiber of ``point`` (small fibers only)."""
    n, m = sys.n_free, sys.m
    A0 = [[int(c) for c in row] for row in sys.A0]
    p = [int(v) for v in point]
    t = [sum(A0[k][j] * p[j] for j in range(n)) + p[n + k] for k in range(m)]
    first = A0[0]
    if _box_size(first, t[0]) > budget.max_points:
        raise TooLarge("fiber too large to enumerate")
    out = []
    y = [0] * n

    def visit(j, remaining):
        if j == n:
            z = [t[k] - sum(A0[k][i] * y[i] for i in range(n)) for k in range(m)]
            if min(z, default=0) >= 0:
                out.append(tuple(y) + tuple(z))
            return
        for v in range(remaining // first[j] + 1):
            y[j] = v
            visit(j + 1, remaining - first[j] * v)
        y[j] = 0

    visit(0, t[0])
    return out
