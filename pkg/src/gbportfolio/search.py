"""The discrete pipeline: start point, cuts, tree search and the driver loop.

``discrete_optimum`` runs the whole method:

1. continuous optimum ``u_c`` and the integer return ceiling ``floor(R_c)``;
2. a feasible integer start ``p_e`` near ``u_c`` (its gap to the ceiling
   bounds every later search);
3. per outer round: integer variable bounds from the region above ``p_e``'s
   return, tangent cuts until the polytope hugs the risk ellipsoid, a test set
   for the linear system, and a best-first walk down the fiber tree from the
   linear optimum using the test vectors in reverse;
4. if the walk runs out of node budget without improving, the lower bounds
   are pushed towards ``p_e`` (fictitious bounds) and the same test set is
   reused for a restricted search.
"""

import heapq
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .convex import (
    Polytope,
    TangentCut,
    border_risk,
    floor_objective,
    halfline_quadric_intersection,
    max_risk_over_polytope,
    solve_max_return_continuous,
    tangent_halfspace,
    tighten_bounds,
)
from .errors import (
    DegenerateNormal,
    EmptyIndexSet,
    EmptyPolytope,
    NoIntersection,
    NumericalFailure,
    ResourceExhausted,
)
from .instance import Instance, QuadraticForm, is_feasible, return_value, risk_form
from .report import PhaseRecord, SolveReport
from .testset import (
    DEFAULT_MAX_PAIRS,
    TIE_BREAKS,
    SlackSystem,
    TestSet,
    build_slack_system,
    groebner_test_set,
    reduce_point,
)

log = logging.getLogger(__name__)

HEURISTICS = ("repair", "concentrate")
RHS_ROUNDINGS = ("nearest", "ceil", "floor")


@dataclass(frozen=True)
class SearchConfig:
    tol: float = 1e-4
    max_num_cuts: int = 4
    max_num_nodes: int = 10_000
    alpha: float = 0.5
    prec: int = 3
    approx_heuristic: str = "repair"
    # "ceil" keeps the whole real ellipsoid inside each cut; "nearest" keeps
    # every integer point of it (what the discrete search needs)
    rhs_rounding: str = "nearest"
    seed: int = 0
    max_pairs: int = DEFAULT_MAX_PAIRS
    # compute only the test vectors that fit inside the search region's
    # right-hand side (exact for every fiber the search can visit)
    truncate: bool = True
    max_rounds: int = 100
    # tie-break among equal-return points in the test-set term order
    tie_break: str = "revlex"

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.max_num_cuts < 0 or self.max_num_nodes < 1:
            raise ValueError("max_num_cuts >= 0 and max_num_nodes >= 1 required")
        if self.prec < 1:
            raise ValueError("prec must be >= 1")
        if self.approx_heuristic not in HEURISTICS:
            raise ValueError(f"approx_heuristic must be one of {HEURISTICS}")
        if self.rhs_rounding not in RHS_ROUNDINGS:
            raise ValueError(f"rhs_rounding must be one of {RHS_ROUNDINGS}")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}")


# --------------------------------------------------------------------------
# initial feasible point


def _feasible(inst, q, x):
    return is_feasible(inst, q, x)


def _repair(inst, q, x):
    """Walk down from an infeasible integer point until it is feasible.

    If a single unit decrement already restores feasibility, the one that
    loses the least return is taken.  Otherwise the decrement with the
    largest risk (or, when only the budget is violated, cost) reduction per
    unit of lost return is applied.  Ties go to the lower index.
    """
    x = list(x)
    mu, a = inst.mu, inst.a
    while not _feasible(inst, q, x):
        cands = [j for j in range(inst.n) if x[j] > 0]
        if not cands:  # pragma: no cover - x = 0 is always feasible
            break
        fixes = []
        for j in cands:
            x[j] -= 1
            if _feasible(inst, q, x):
                fixes.append((mu[j], j))
            x[j] += 1
        if fixes:
            j = min(fixes)[1]
        else:
            over_risk = q(x) > q.cap
            base = q(x)
            best, j = None, cands[0]
            for k in cands:
                if over_risk:
                    x[k] -= 1
                    drop = base - q(x)
                    x[k] += 1
                else:
                    drop = float(a[k])
                ratio = math.inf if mu[k] == 0 else drop / mu[k]
                if best is None or ratio > best:
                    best, j = ratio, k
        x[j] -= 1
    return x


def _improve(inst, q, x):
    """Unit increments while feasible, best return first (ties: lower index)."""
    x = list(x)
    order = sorted(range(inst.n), key=lambda j: (-inst.mu[j], j))
    moved = True
    while moved:
        moved = False
        for j in order:
            if inst.mu[j] <= 0:
                continue
            x[j] += 1
            if _feasible(inst, q, x):
                moved = True
                break
            x[j] -= 1
    return x


def _concentrate(inst, q, u_c):
    """Fix the best-value asset first, then place the rest.

    The asset with the highest return per unit of price gets the largest
    integer quantity, not above ``ceil(u_c)``, that is feasible on its own.
    The remaining assets come from the continuous optimum with that quantity
    fixed, rounded down and repaired.
    """
    value = [m / p for m, p in zip(inst.mu, inst.a)]
    k = max(range(inst.n), key=lambda j: (value[j], -j))
    t = int(math.ceil(u_c[k] - 1e-9))
    while t > 0:
        e = [0] * inst.n
        e[k] = t
        if _feasible(inst, q, e):
            break
        t -= 1
    x = [0] * inst.n
    x[k] = t
    rest = [j for j in range(inst.n) if j != k]
    if rest and t >= 0:
        try:
            sol = solve_max_return_continuous(inst, q, fixed={k: t})
            for j in rest:
                x[j] = int(math.floor(sol.point[j] + 1e-9))
        except Exception as exc:  # fall back to the plain rounding
            log.info("concentrate: continuous solve with fixed asset failed (%s)", exc)
            for j in rest:
                x[j] = int(math.floor(u_c[j] + 1e-9))
    return x


def discrete_approx(inst: Instance, q: QuadraticForm, u_c, heuristic: str = "repair"):
    """Feasible integer point near the continuous optimum, and its return."""
    if heuristic == "repair":
        x = [max(0, int(math.floor(v + 0.5))) for v in u_c]
    elif heuristic == "concentrate":
        x = _concentrate(inst, q, u_c)
    else:
        raise ValueError(f"unknown heuristic {heuristic!r}")
    x = _repair(inst, q, x)
    x = _improve(inst, q, x)
    x = tuple(int(v) for v in x)
    return x, return_value(inst, x)


# --------------------------------------------------------------------------
# cuts


@dataclass
class CutRecord:
    cut: TangentCut
    p_max: tuple
    r_m_sq: float
    p_prime: tuple


def new_polytope(poly: Polytope, q: QuadraticForm, p_e, tol: float, r0_sq: float,
                 max_num_cuts: int, prec: int = 3, rhs_rounding: str = "nearest",
                 seed: int = 0):
    """Add tangent cuts while the polytope reaches too far outside the ellipsoid.

    Returns ``(poly, records, r_m_sq)`` where ``r_m_sq`` is the maximal
    normalized risk over the final polytope.
    """
    records: List[CutRecord] = []
    mr = max_risk_over_polytope(q, poly, seed=seed)
    while mr.r_m_sq - r0_sq > tol and len(records) < max_num_cuts:
        try:
            p_prime = halfline_quadric_intersection(q, p_e, mr.point)
            cut = tangent_halfspace(q, p_prime, prec=prec, rhs_rounding=rhs_rounding)
        except (DegenerateNormal, NoIntersection) as exc:
            log.info("cut generation stopped: %s", exc)
            break
        if any(tuple(cut.normal) == tuple(c.normal) for c in poly.cuts):
            log.info("cut %s repeats an existing normal; stopping", cut.normal)
            break
        poly = poly.add_cut(cut)
        records.append(CutRecord(cut, tuple(float(v) for v in mr.point), mr.r_m_sq,
                                 tuple(float(v) for v in p_prime)))
        mr = max_risk_over_polytope(q, poly, seed=seed)
    return poly, records, mr.r_m_sq


# --------------------------------------------------------------------------
# tree search


@dataclass
class SearchState:
    incumbent: tuple
    incumbent_gap: int
    max_num_nodes: int
    sw_fict_bounds: bool = False
    nodes_processed: int = 0
    improved: bool = False


def tree_search(p_ini, ts: TestSet, sys: SlackSystem, q: QuadraticForm, inst: Instance,
                state: SearchState, trace: Optional[Callable[[str], None]] = None):
    """Best-first walk from the linear optimum along reversed test vectors.

    Nodes are fiber points; the frontier is ordered by the return gap (the
    return-slack coordinate), ties broken by the point itself.  A child is
    dropped when a coordinate goes negative, when its gap is not below the
    incumbent's, or when it was seen before.  Returns
    ``(sw_num_nodes, sw_improve, incumbent)``.
    """
    ks = sys.return_slack
    V = ts.vectors
    dtype = V.dtype
    state.nodes_processed = 0
    state.improved = False

    def emit(point, gap, action):
        if trace is not None:
            x = sys.portfolio(point)
            trace(f"node ({','.join(str(v) for v in x)}) delta1={gap} action={action}")

    def accept(point, gap):
        x = sys.portfolio(point)
        if q(x) <= q.cap and inst_budget_ok(x):
            state.incumbent = tuple(int(v) for v in x)
            state.incumbent_gap = int(gap)
            state.improved = True
            return True
        return False

    def inst_budget_ok(x):
        return sum(int(p) * int(v) for p, v in zip(inst.a, x)) <= inst.B

    p0 = tuple(int(v) for v in p_ini)
    g0 = p0[ks]
    if g0 >= state.incumbent_gap:
        emit(p0, g0, "pruned-gap")
        return False, False, state.incumbent
    if accept(p0, g0):
        emit(p0, g0, "feasible-improve")
        return False, True, state.incumbent
    emit(p0, g0, "new")
    frontier = [(g0, p0)]
    visited = {p0}
    while frontier:
        gap, point = heapq.heappop(frontier)
        if gap >= state.incumbent_gap:
            continue  # superseded by a later incumbent
        if state.nodes_processed >= state.max_num_nodes:
            heapq.heappush(frontier, (gap, point))
            return True, state.improved, state.incumbent
        state.nodes_processed += 1
        P = np.asarray(point, dtype=dtype)
        children = P[None, :] + V
        for child in children:
            c = tuple(int(v) for v in child)
            cg = c[ks]
            if min(c) < 0:
                emit(c, cg, "pruned-bound")
                continue
            if cg >= state.incumbent_gap:
                emit(c, cg, "pruned-gap")
                continue
            if c in visited:
                emit(c, cg, "duplicate")
                continue
            visited.add(c)
            if accept(c, cg):
                emit(c, cg, "feasible-improve")
                if state.sw_fict_bounds:
                    return False, True, state.incumbent
                continue
            emit(c, cg, "new")
            heapq.heappush(frontier, (cg, c))
    return False, state.improved, state.incumbent


# --------------------------------------------------------------------------
# fictitious bounds


def fictitious_bounds(b, p_e, alpha: float = 0.5):
    """Lower bounds moved a fraction ``alpha`` of the way towards ``p_e``."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    out = []
    for lo, pe in zip(b, p_e):
        lo, pe = int(lo), int(pe)
        if pe < lo:
            raise ValueError("p_e must dominate the bounds")
        out.append(lo + int(math.floor(alpha * (pe - lo))))
    return tuple(out)


# --------------------------------------------------------------------------
# driver


def _start_point(sys: SlackSystem, p_e):
    """The bound point, or p_e in the same fiber when the former is not >= 0."""
    start = sys.start_point()
    if min(start) >= 0:
        return start
    return sys.extend(p_e)


def discrete_optimum(inst: Instance, config: SearchConfig = SearchConfig(),
                     trace: Optional[Callable[[str], None]] = None) -> SolveReport:
    """Solve the integer mean-variance problem; see the module docstring."""
    t_start = time.perf_counter()
    q = risk_form(inst)
    n = inst.n
    phases: List[PhaseRecord] = []
    cut_log = []

    t0 = time.perf_counter()
    cont = solve_max_return_continuous(inst, q)
    u_c = tuple(float(v) for v in cont.point)
    R_c = float(cont.objective)
    R_ceil = floor_objective(R_c)
    p_e, R_e = discrete_approx(inst, q, u_c, config.approx_heuristic)
    initial = p_e
    phases.append(PhaseRecord("start", elapsed=time.perf_counter() - t0,
                              improvement=list(p_e)))
    try:
        r_b_sq = border_risk(inst, q)[0]
    except (EmptyIndexSet, np.linalg.LinAlgError):
        r_b_sq = None

    def finish(proven, status="ok", message=""):
        x = tuple(int(v) for v in p_e)
        if not is_feasible(inst, q, x):  # pragma: no cover - guarded by construction
            raise NumericalFailure("reported optimum is infeasible")
        invested = sum(int(p) * v for p, v in zip(inst.a, x))
        return SolveReport(
            optimum=list(x), labels=[inst.label(i) for i in range(n)],
            ret=return_value(inst, x), risk_value=float(q(x)), invested=int(invested),
            uninvested=int(inst.B - invested), proven=bool(proven), r_b_sq=r_b_sq,
            B=int(inst.B), r0_sq=float(inst.r0_sq), continuous=list(u_c), R_c=R_c,
            R_ceiling=R_ceil, initial=list(initial), R_e=int(return_value(inst, initial)),
            bounds=list(bounds) if bounds is not None else None,
            phases=phases, cuts=cut_log, config=asdict(config), status=status,
            message=message, elapsed=time.perf_counter() - t_start,
        )

    bounds = None
    if R_ceil - R_e <= 0:
        return finish(True, message="start point attains the return ceiling")

    sw_eop = False
    sw_fict = False
    b = None
    sys = ts = None
    rounds = 0
    while not sw_eop:
        rounds += 1
        if rounds > config.max_rounds:
            return finish(False, "best-found", "round limit reached")
        sw_improve = False
        sw_num_nodes = False
        if not sw_fict:
            t0 = time.perf_counter()
            lower, upper, fixed = tighten_bounds(inst, q, R_e, R_ceil, x0=np.array(p_e, float))
            lower = tuple(min(lo, pe) for lo, pe in zip(lower, p_e))
            fixed = {j: v for j, v in fixed.items() if v == p_e[j]}
            b = lower
            bounds = b
            poly = Polytope.initial(inst, R_ceil, R_floor=R_e, lower=b, fixed=fixed)
            phases.append(PhaseRecord("bounds", elapsed=time.perf_counter() - t0,
                                      improvement=list(b)))
            need_cuts = True
        else:
            need_cuts = False
        while not (sw_eop or sw_improve or sw_num_nodes):
            t0 = time.perf_counter()
            added = []
            r_m_sq = None
            if need_cuts:
                try:
                    poly, added, r_m_sq = new_polytope(
                        poly, q, p_e, config.tol, inst.r0_sq, config.max_num_cuts,
                        config.prec, config.rhs_rounding, config.seed)
                except EmptyPolytope:
                    # nothing above the incumbent's return survives the bounds
                    return finish(True, message="search region is empty")
                for rec in added:
                    cut_log.append({"normal": list(rec.cut.normal), "rhs": int(rec.cut.rhs),
                                    "support": float(rec.cut.support),
                                    "p_max": list(rec.p_max), "r_m_sq": float(rec.r_m_sq)})
                try:
                    sys = build_slack_system(inst, poly)
                except Exception as exc:
                    log.info("slack system rejected (%s); region is empty", exc)
                    return finish(True, message="search region is empty")
                if sys.n_free == 0:
                    return finish(True, message="all variables fixed by the bounds")
                try:
                    ts = groebner_test_set(sys, config.max_pairs, truncate=config.truncate,
                                           tie_break=config.tie_break)
                except ResourceExhausted as exc:
                    phases.append(PhaseRecord("testset", cuts=len(added), r_max_sq=r_m_sq,
                                              elapsed=time.perf_counter() - t0))
                    return finish(False, "failed",
                                  f"test-set completion exhausted its pair budget ({exc}); "
                                  "add cuts or supply a better start point")
                need_cuts = False
            else:
                sys = sys.retranslate(b)
            t_ts = time.perf_counter()
            start = _start_point(sys, p_e)
            p_ini = reduce_point(start, ts)
            state = SearchState(incumbent=tuple(p_e), incumbent_gap=R_ceil - R_e,
                                max_num_nodes=config.max_num_nodes, sw_fict_bounds=sw_fict)
            sw_num_nodes, sw_improve, best = tree_search(p_ini, ts, sys, q, inst, state, trace)
            phases.append(PhaseRecord(
                "search", cuts=len(added), basis=len(ts), nodes=state.nodes_processed,
                r_max_sq=r_m_sq, sw_fict_bounds=sw_fict, sw_num_nodes=sw_num_nodes,
                improvement=list(best) if sw_improve else None,
                p_ini=list(sys.portfolio(p_ini)),
                elapsed=time.perf_counter() - t0, search_elapsed=time.perf_counter() - t_ts))
            if sw_improve:
                p_e = tuple(int(v) for v in best)
                R_e = return_value(inst, p_e)
            if sw_fict:
                if not sw_improve:
                    sw_eop = True
                    return finish(False, "best-found",
                                  "restricted search found no improvement")
                sw_fict = False
            elif not sw_num_nodes:
                sw_eop = True
            elif not sw_improve:
                b = fictitious_bounds(b, p_e, config.alpha)
                sw_fict = True
        if R_ceil - R_e <= 0:
            break
    return finish(True)
