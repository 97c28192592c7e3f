"""Continuous subproblems over the risk ellipsoid and the linear polytope.

All convex solves go through one small dense log-barrier method for

    minimize  c.x   s.t.  G x <= h,  x^T P x + d.x <= e

(at most one convex quadratic row), followed by an active-set Newton
polish on the KKT system.  Variables are rescaled to x = s * xi with
s_j = B / a_j so every coordinate lives in roughly [0, 1].
"""

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import (
    DegenerateNormal,
    EmptyIndexSet,
    EmptyPolytope,
    Infeasible,
    NoIntersection,
    NumericalFailure,
)
from .instance import Instance, QuadraticForm, risk_form

log = logging.getLogger(__name__)

KKT_TOL = 1e-8
ROUND_EPS = 1e-7
EXACT_VERTEX_LIMIT = 200_000


# --------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class TangentCut:
    normal: tuple
    rhs: int
    prec: int
    support: float = 0.0

    def value(self, x):
        return sum(int(c) * v for c, v in zip(self.normal, x))


@dataclass(frozen=True)
class Polytope:
    """Linear rows ``normal.x <= rhs`` plus ``mu.x >= floor`` and ``x >= lower``.

    ``rows[0]`` is the budget row and ``rows[1]`` the return ceiling; cut rows
    follow in insertion order.  ``fixed`` holds (index, value) pairs for
    assets whose lower and upper bounds coincide.
    """

    rows: tuple
    row_kinds: tuple
    lower: tuple
    floor: Optional[int] = None
    fixed: tuple = ()

    @classmethod
    def initial(cls, inst: Instance, R_ceiling: int, R_floor=None, lower=None, fixed=None):
        lower = tuple(int(v) for v in (lower if lower is not None else [0] * inst.n))
        fx = tuple(sorted((int(j), int(v)) for j, v in dict(fixed or {}).items()))
        rows = ((tuple(inst.a), int(inst.B)), (tuple(inst.mu), int(R_ceiling)))
        return cls(rows, ("budget", "return"), lower, R_floor, fx)

    @property
    def n(self):
        return len(self.lower)

    @property
    def budget(self):
        return self.rows[self.row_kinds.index("budget")][1]

    @property
    def mu(self):
        return self.rows[self.row_kinds.index("return")][0]

    @property
    def R_ceiling(self):
        return self.rows[self.row_kinds.index("return")][1]

    @property
    def cuts(self):
        return [TangentCut(tuple(nrm), rhs, 0) for (nrm, rhs), k in zip(self.rows, self.row_kinds)
                if k == "cut"]

    def add_cut(self, cut: TangentCut) -> "Polytope":
        return replace(self, rows=self.rows + ((tuple(cut.normal), int(cut.rhs)),),
                       row_kinds=self.row_kinds + ("cut",))

    def with_lower(self, lower) -> "Polytope":
        return replace(self, lower=tuple(int(v) for v in lower))

    def with_floor(self, floor) -> "Polytope":
        return replace(self, floor=floor)

    def inequalities(self):
        """Dense ``(G, h)`` over all n variables, lower bounds included."""
        n = self.n
        G, h = [], []
        for nrm, rhs in self.rows:
            G.append([float(c) for c in nrm])
            h.append(float(rhs))
        if self.floor is not None:
            G.append([-float(c) for c in self.mu])
            h.append(-float(self.floor))
        for j in range(n):
            row = [0.0] * n
            row[j] = -1.0
            G.append(row)
            h.append(-float(self.lower[j]))
        return np.array(G).reshape(len(G), n), np.array(h)

    def contains(self, x, tol=0.0) -> bool:
        G, h = self.inequalities()
        x = np.asarray(x, dtype=float)
        fixed_ok = all(abs(x[j] - v) <= tol for j, v in self.fixed)
        return bool(np.all(G @ x <= h + tol * (1 + np.abs(h)))) and fixed_ok


@dataclass
class ContinuousSolution:
    point: np.ndarray
    objective: float
    status: str = "optimal"
    multipliers: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# barrier solver


@dataclass
class _Problem:
    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    P: Optional[np.ndarray] = None
    d: Optional[np.ndarray] = None
    e: float = 0.0

    def quad(self, x):
        return float(x @ self.P @ x + self.d @ x - self.e)

    def slacks(self, x):
        s = self.h - self.G @ x
        if self.P is not None:
            s = np.append(s, -self.quad(x))
        return s


def _center(prob: _Problem, x, t, max_iter=100):
    """Newton iterations on t*c.x - sum log(slacks)."""
    G, h = prob.G, prob.h
    quad = prob.P is not None
    for _ in range(max_iter):
        s = h - G @ x
        g = t * prob.c + G.T @ (1.0 / s)
        H = (G.T * (1.0 / s**2)) @ G
        if quad:
            sq = -prob.quad(x)
            gq = 2 * prob.P @ x + prob.d
            g = g + gq / sq
            H = H + 2 * prob.P / sq + np.outer(gq, gq) / sq**2
        try:
            dx = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            dx = -np.linalg.lstsq(H, g, rcond=None)[0]
        lam2 = float(-g @ dx)
        if lam2 / 2 <= 1e-12:
            break
        step = 1.0
        f0 = _barrier_value(prob, x, t)
        while True:
            xn = x + step * dx
            if np.all(prob.slacks(xn) > 0):
                fn = _barrier_value(prob, xn, t)
                if fn <= f0 - 0.25 * step * lam2:
                    break
            step *= 0.5
            if step < 1e-14:
                return x
        x = xn
    return x


def _barrier_value(prob, x, t):
    s = prob.slacks(x)
    return float(t * prob.c @ x - np.sum(np.log(s)))


def _barrier(prob: _Problem, x0, gap=1e-11):
    m = prob.G.shape[0] + (1 if prob.P is not None else 0)
    t = 1.0
    x = x0
    scale = max(1.0, float(np.abs(prob.c).sum()))
    t = m / scale
    while True:
        x = _center(prob, x, t)
        if m / t < gap * max(1.0, abs(float(prob.c @ x))):
            return x
        t *= 20.0
        if t > 1e18:
            return x


def _phase_one(G, h, P, d, e, x0):
    """Strictly feasible point or None.  Minimizes the worst violation."""
    n = G.shape[1]
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float)
    viol = list(G @ x0 - h)
    qscale = 1.0
    if P is not None:
        qscale = max(abs(e), 1.0)
        viol.append((x0 @ P @ x0 + d @ x0 - e) / qscale)
    if max(viol, default=-1) < -1e-9:
        return x0
    s0 = max(viol) + 1.0
    # variables (x, s); rows G x - s <= h; quad (x'Px + d'x - e)/qs - s <= 0
    Ge = np.hstack([G, -np.ones((G.shape[0], 1))])
    # keep s bounded below so the problem stays bounded
    Ge = np.vstack([Ge, np.append(np.zeros(n), -1.0)])
    he = np.append(h, 1.0)
    c = np.append(np.zeros(n), 1.0)
    if P is not None:
        Pe = np.zeros((n + 1, n + 1))
        Pe[:n, :n] = P / qscale
        de = np.append(d / qscale, -1.0)
        prob = _Problem(c, Ge, he, Pe, de, e / qscale)
    else:
        prob = _Problem(c, Ge, he)
    z = np.append(x0, s0)
    t = 1.0
    for _ in range(60):
        z = _center(prob, z, t)
        if z[-1] < -1e-7:
            return z[:n]
        if prob.G.shape[0] / t < 1e-12:
            break
        t *= 10.0
    return None


def _polish(prob: _Problem, x, tol=1e-9):
    """Newton on the KKT system of the constraints active at x."""
    G, h = prob.G, prob.h
    n = x.size
    s = h - G @ x
    gscale = np.linalg.norm(G, axis=1) + 1e-300
    lin_act = np.flatnonzero(s / gscale <= 1e-6 * (1 + np.abs(h) / gscale))
    q_act = False
    if prob.P is not None:
        gq = 2 * prob.P @ x + prob.d
        q_act = -prob.quad(x) <= 1e-6 * (abs(prob.e) + 1)
    k = lin_act.size + int(q_act)
    if k > n:
        return x, None
    y = x.copy()
    lam = np.zeros(k)
    for _ in range(30):
        rows = [G[i] for i in lin_act]
        cons = [float(G[i] @ y - h[i]) for i in lin_act]
        if q_act:
            gq = 2 * prob.P @ y + prob.d
            rows.append(gq)
            cons.append(prob.quad(y))
        J = np.array(rows).reshape(k, n)
        H = np.zeros((n, n))
        if q_act:
            H = 2 * prob.P * lam[-1]
        r1 = prob.c + J.T @ lam
        r2 = np.array(cons)
        K = np.block([[H, J.T], [J, np.zeros((k, k))]])
        rhs = -np.concatenate([r1, r2])
        try:
            step = np.linalg.solve(K, rhs)
        except np.linalg.LinAlgError:
            return x, None
        y = y + step[:n]
        lam = lam + step[n:]
        if np.linalg.norm(step[:n]) <= tol * (1 + np.linalg.norm(y)):
            break
    if np.any(lam < -1e-9 * (1 + np.abs(prob.c).sum())):
        return x, None
    sl = prob.slacks(y)
    scale = np.append(np.abs(h), abs(prob.e)) if prob.P is not None else np.abs(h)
    if np.any(sl < -1e-10 * (1 + scale[: sl.size])):
        return x, None
    if prob.c @ y > prob.c @ x + 1e-9 * (1 + abs(prob.c @ x)):
        return x, None
    return y, lam


def _solve(c, G, h, P=None, d=None, e=0.0, x0=None, polish=True):
    n = c.size
    if P is not None and d is None:
        d = np.zeros(n)
    x = _phase_one(G, h, P, d, e, x0)
    if x is None:
        raise Infeasible("no strictly feasible point")
    prob = _Problem(c, G, h, P, d, e)
    x = _barrier(prob, x)
    lam = None
    if polish:
        x, lam = _polish(prob, x)
    return x, lam


# --------------------------------------------------------------------------
# problem assembly in scaled coordinates


def _scales(inst: Instance):
    B = max(inst.B, 1)
    return np.array([max(B / a, 1e-12) for a in inst.a], dtype=float)


def _assemble(inst: Instance, q: QuadraticForm, rows, lower=None, fixed=None):
    """Scaled (G, h, P, e) for rows + x >= lower + ellipsoid, fixed substituted.

    Returns a closure mapping a reduced scaled point back to full x.
    """
    n = inst.n
    s = _scales(inst)
    fixed = dict(fixed or {})
    free = [j for j in range(n) if j not in fixed]
    xfix = np.zeros(n)
    for j, v in fixed.items():
        xfix[j] = v
    lower = np.zeros(n) if lower is None else np.asarray(lower, dtype=float)
    G, h = [], []
    for nrm, rhs in rows:
        nrm = np.asarray(nrm, dtype=float)
        scale = np.abs(nrm[free] * s[free]).sum() or 1.0
        G.append(nrm[free] * s[free] / scale)
        h.append((rhs - nrm @ xfix) / scale)
    for k, j in enumerate(free):
        row = np.zeros(len(free))
        row[k] = -1.0
        G.append(row)
        h.append(-lower[j] / s[j])
    G = np.array(G).reshape(len(G), len(free))
    h = np.array(h)
    C = q.C
    Sf = s[free]
    cap = q.cap if q.cap > 0 else 1.0
    P = (C[np.ix_(free, free)] * Sf[:, None] * Sf[None, :]) / cap
    d = 2 * (C[np.ix_(free, range(n))] @ xfix) * Sf / cap
    e = (q.cap - xfix @ C @ xfix) / cap

    def unscale(xi):
        x = xfix.copy()
        x[free] = xi * Sf
        return x

    return free, s, G, h, P, d, e, unscale


def _objective(vec, free, s):
    vec = np.asarray(vec, dtype=float)
    c = vec[free] * s[free]
    nrm = np.abs(c).sum()
    return (c / nrm if nrm else c), (nrm or 1.0)


def _solve_over_region(inst, q, rows, objective, lower=None, fixed=None, x0=None):
    """min objective.x over rows + ellipsoid + x >= lower; returns full x."""
    free, s, G, h, P, d, e, unscale = _assemble(inst, q, rows, lower, fixed)
    if not free:
        x = unscale(np.zeros(0))
        return x, float(np.dot(objective, x))
    c, _ = _objective(objective, free, s)
    xi0 = None
    if x0 is not None:
        xi0 = np.asarray(x0, dtype=float)[free] / s[free]
    xi, _ = _solve(c, G, h, P, d, e, x0=xi0)
    x = unscale(xi)
    return x, float(np.dot(objective, x))


# --------------------------------------------------------------------------
# public operations


def solve_max_return_continuous(inst: Instance, q: Optional[QuadraticForm] = None,
                                extra=(), fixed=None) -> ContinuousSolution:
    """Maximize mu.x over a.x <= B, Q(x) <= B^2 r^2, x >= 0 and ``extra`` rows.

    ``fixed`` maps asset indices to values held constant.
    """
    q = q or risk_form(inst)
    n = inst.n
    mu = np.array(inst.mu, dtype=float)
    if q.cap <= 0 or not np.any(mu > 0):
        x = np.zeros(n)
        return ContinuousSolution(x, 0.0)
    rows = [(inst.a, inst.B)] + [(tuple(r[0]), r[1]) for r in extra]
    try:
        x, _ = _solve_over_region(inst, q, rows, -mu, fixed=fixed)
    except Infeasible:
        if extra or fixed:
            raise
        raise NumericalFailure("continuous solve failed on a region containing 0")
    x = np.maximum(x, 0.0)
    return ContinuousSolution(x, float(mu @ x))


def floor_objective(R_c: float) -> int:
    """Integer ceiling for the return: floor(R_c) with a tiny safety margin."""
    return int(math.floor(R_c + 1e-9 * (1 + abs(R_c))))


def tighten_bounds(inst: Instance, q: QuadraticForm, R_floor, R_ceiling, x0=None):
    """Integer bounds b_j <= x_j <= u_j over the continuous region.

    Region: a.x <= B, R_floor <= mu.x <= R_ceiling, Q(x) <= cap, x >= 0.
    Returns ``(lower, upper, fixed)`` with ``fixed = {j: b_j}`` where b_j == u_j.
    """
    n = inst.n
    mu = tuple(inst.mu)
    rows = [(inst.a, inst.B), (mu, R_ceiling), (tuple(-m for m in mu), -R_floor)]
    lower, upper = [], []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        try:
            _, lo = _solve_over_region(inst, q, rows, e, x0=x0)
            _, hi = _solve_over_region(inst, q, rows, -e, x0=x0)
        except Infeasible:
            # thin region: relax the return floor by half a unit, still valid
            # for integer points of return >= R_floor
            relaxed = [(inst.a, inst.B), (mu, R_ceiling + 0.5),
                       (tuple(-m for m in mu), -(R_floor - 0.5))]
            _, lo = _solve_over_region(inst, q, relaxed, e, x0=x0)
            _, hi = _solve_over_region(inst, q, relaxed, -e, x0=x0)
        hi = -hi
        b = max(0, math.ceil(lo - ROUND_EPS * (1 + abs(lo))))
        u = math.floor(hi + ROUND_EPS * (1 + abs(hi)))
        lower.append(int(b))
        upper.append(int(u))
    fixed = {j: lower[j] for j in range(n) if lower[j] == upper[j]}
    return tuple(lower), tuple(upper), fixed


def lower_bound_reals(inst, q, R_floor, R_ceiling):
    """Unrounded continuous minima of each coordinate (diagnostics)."""
    n = inst.n
    mu = tuple(inst.mu)
    rows = [(inst.a, inst.B), (mu, R_ceiling), (tuple(-m for m in mu), -R_floor)]
    out = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        out.append(_solve_over_region(inst, q, rows, e)[1])
    return out


# --------------------------------------------------------------------------
# convex quadratic maximization over the polytope


@dataclass
class MaxRisk:
    point: np.ndarray
    r_m_sq: float
    exact: bool

    def __iter__(self):
        return iter((self.point, self.r_m_sq))


def _reduced_system(poly: Polytope):
    """Free-variable (G, h) and the affine lift back to full space."""
    n = poly.n
    fixed = dict(poly.fixed)
    free = [j for j in range(n) if j not in fixed]
    xfix = np.zeros(n)
    for j, v in fixed.items():
        xfix[j] = v
    rows, h = [], []
    for nrm, rhs in poly.rows:
        nrm = np.asarray(nrm, dtype=float)
        rows.append(nrm[free])
        h.append(rhs - nrm @ xfix)
    if poly.floor is not None:
        mu = np.asarray(poly.mu, dtype=float)
        rows.append(-mu[free])
        h.append(-poly.floor + mu @ xfix)
    G = np.array(rows).reshape(len(rows), len(free))
    lb = np.array([poly.lower[j] for j in free], dtype=float)
    return free, xfix, G, np.array(h), lb


def _vertex_count(d, m):
    return sum(math.comb(m, k) * math.comb(d, k) for k in range(0, min(d, m) + 1))


def _enumerate_vertices(G, h, lb):
    """All vertices of {G y <= h, y >= lb} by active-set enumeration."""
    m, d = G.shape
    out = []
    tol = 1e-9
    for k in range(0, min(d, m) + 1):
        for R in itertools.combinations(range(m), k):
            for T in itertools.combinations(range(d), k):
                y = lb.copy()
                if k:
                    M = G[np.ix_(R, T)]
                    if abs(np.linalg.det(M)) < 1e-12 * (1 + np.abs(M).max() ** k):
                        continue
                    rhs = h[list(R)] - G[list(R)] @ lb
                    y[list(T)] = lb[list(T)] + np.linalg.solve(M, rhs)
                if np.all(y >= lb - tol * (1 + np.abs(lb))) and np.all(
                    G @ y <= h + tol * (1 + np.abs(h))
                ):
                    out.append(y)
    return out


def _lp_vertex(c, G, h, lb):
    from scipy.optimize import linprog

    res = linprog(-c, A_ub=G, b_ub=h, bounds=[(v, None) for v in lb], method="highs")
    if res.status != 0:
        return None
    return res.x


def max_risk_over_polytope(q: QuadraticForm, poly: Polytope, seed=0,
                           exact_limit=EXACT_VERTEX_LIMIT) -> MaxRisk:
    """Maximize the convex form Q over the polytope (vertex-attained).

    Exact active-set vertex enumeration when the number of candidate bases is
    at most ``exact_limit``; otherwise successive linearization (each step
    an LP over P in the gradient direction) from 20 random vertices, and the
    result is flagged non-exact.
    """
    free, xfix, G, h, lb = _reduced_system(poly)
    B = float(poly.budget)
    d = len(free)

    def lift(y):
        x = xfix.copy()
        x[free] = y
        return x

    if d == 0:
        x = lift(np.zeros(0))
        if not np.all(G @ np.zeros(0) <= h + 1e-9) if G.size else False:
            raise EmptyPolytope("polytope is empty")
        return MaxRisk(x, q(x) / B**2, True)

    if _vertex_count(d, G.shape[0]) <= exact_limit:
        verts = _enumerate_vertices(G, h, lb)
        if not verts:
            raise EmptyPolytope("polytope has no vertices")
        X = np.array([lift(v) for v in verts])
        vals = q.values(X)
        i = int(np.argmax(vals))
        return MaxRisk(X[i], float(vals[i]) / B**2, True)

    rng = np.random.default_rng(seed)
    Cf = q.C[np.ix_(free, free)]
    lin = 2 * q.C[np.ix_(free, range(poly.n))] @ xfix
    best, best_val = None, -np.inf
    for _ in range(20):
        y = _lp_vertex(rng.standard_normal(d), G, h, lb)
        if y is None:
            raise EmptyPolytope("polytope is empty")
        val = q(lift(y))
        for _ in range(200):
            grad = 2 * Cf @ y + lin
            y2 = _lp_vertex(grad, G, h, lb)
            v2 = q(lift(y2))
            if v2 <= val * (1 + 1e-12):
                break
            y, val = y2, v2
        if val > best_val:
            best, best_val = y, val
    x = lift(best)
    log.info("max risk: heuristic ascent in dimension %d", d)
    return MaxRisk(x, best_val / B**2, False)


# --------------------------------------------------------------------------
# tangent cuts


def halfline_quadric_intersection(q: QuadraticForm, p_from, p_toward) -> np.ndarray:
    """Point where the segment from a feasible point meets Q = cap."""
    pe = np.asarray(p_from, dtype=float)
    pm = np.asarray(p_toward, dtype=float)
    cap = q.cap
    if q(pm) <= cap:
        raise NoIntersection("target point is inside the ellipsoid")
    dvec = pm - pe
    qa = float(dvec @ q.C @ dvec)
    qb = float(2 * pe @ q.C @ dvec)
    qc = q(pe) - cap
    if qc > 1e-12 * cap:
        raise NoIntersection("start point is outside the ellipsoid")
    qc = min(qc, 0.0)
    disc = qb * qb - 4 * qa * qc
    if qa <= 0 or disc < 0:
        raise NumericalFailure("ill-conditioned half-line root")
    root = math.sqrt(disc)
    lam = (-2 * qc) / (qb + root) if qb > 0 else (-qb + root) / (2 * qa)
    if not 0 <= lam <= 1 + 1e-12:
        raise NumericalFailure(f"half-line root {lam} outside [0, 1]")
    return pe + lam * dvec


def _round_half_away(v):
    return np.sign(v) * np.floor(np.abs(v) + 0.5)


def support_value(q: QuadraticForm, normal) -> float:
    """max normal.y over the ellipsoid Q(y) <= cap."""
    nv = np.asarray(normal, dtype=float)
    return math.sqrt(q.cap * float(nv @ q.solve(nv)))


def tangent_halfspace(q: QuadraticForm, p_prime, prec: int = 3, rhs_rounding: str = "nearest",
                      strip_gcd: bool = False) -> TangentCut:
    """Integer half-space around the ellipsoid, normal close to grad Q(p').

    ``rhs_rounding='ceil'`` keeps the whole real ellipsoid inside the cut.
    ``'nearest'`` and ``'floor'`` keep every integer point of the ellipsoid
    (an integer combination is at most floor(support)), which is all the
    discrete search needs.
    """
    if prec < 1:
        raise ValueError("prec must be >= 1")
    g = q.gradient(p_prime)
    norm1 = np.abs(g).sum()
    if norm1 == 0:
        raise DegenerateNormal("zero gradient")
    nt = _round_half_away(g / norm1 * 10**prec).astype(np.int64)
    if not nt.any():
        raise DegenerateNormal("normal rounds to zero")
    if strip_gcd:
        gd = int(np.gcd.reduce(np.abs(nt)))
        if gd > 1:
            nt = nt // gd
    c = support_value(q, nt)
    if rhs_rounding == "ceil":
        rhs = math.ceil(c)
    elif rhs_rounding == "nearest":
        rhs = math.floor(c + 0.5)
    elif rhs_rounding == "floor":
        rhs = math.floor(c)
    else:
        raise ValueError(f"unknown rhs rounding {rhs_rounding!r}")
    return TangentCut(tuple(int(v) for v in nt), int(rhs), prec, c)


# --------------------------------------------------------------------------
# border risk


def border_risk(inst: Instance, q: Optional[QuadraticForm] = None):
    """Risk level below which the continuous optimum leaves budget unspent."""
    q = q or risk_form(inst)
    mu = np.array(inst.mu, dtype=float)
    a = np.array(inst.a, dtype=float)
    v = q.solve(mu)
    J = [j for j in range(inst.n) if v[j] > 0]
    if not J:
        raise EmptyIndexSet("no positive component in C^-1 mu")
    CJ = q.C[np.ix_(J, J)]
    w = np.linalg.solve(CJ, mu[J])
    num = float(mu[J] @ w)
    den = float(a[J] @ w) ** 2
    return num / den, tuple(J)
