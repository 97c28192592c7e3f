import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbportfolio.convex import Polytope, border_risk, solve_max_return_continuous
from gbportfolio.errors import TooLarge
from gbportfolio.instance import Instance, is_feasible, return_value, risk_form
from gbportfolio.oracle import EnumerationBudget, brute_force_optimum
from gbportfolio.search import (
    SearchConfig,
    SearchState,
    discrete_approx,
    discrete_optimum,
    fictitious_bounds,
    new_polytope,
    tree_search,
)
from gbportfolio.testset import build_slack_system, groebner_test_set, reduce_point

from conftest import mixed_instance, random_spd


def random_instance(seed, n=None, B=None):
    rng = np.random.default_rng(seed)
    n = n or int(rng.choice([2, 3, 4]))
    a = rng.integers(1, 21, n)
    mu = rng.integers(1, 51, n)
    om = random_spd(rng, n)
    B = B or int(rng.integers(10, 201))
    rb, _ = border_risk(Instance(a, mu, om, B, 1.0))
    r = float(rb * np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
    return Instance(a, mu, om, B, r)


# --------------------------------------------------------------------------
# configuration


@pytest.mark.parametrize("kwargs", [
    dict(alpha=0.0), dict(alpha=1.0), dict(max_num_nodes=0), dict(max_num_cuts=-1),
    dict(prec=0), dict(approx_heuristic="round"), dict(rhs_rounding="up"),
    dict(tie_break="lex"),
])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


# --------------------------------------------------------------------------
# pieces


def test_discrete_approx_on_illustrative(illustrative):
    q = risk_form(illustrative)
    u_c = solve_max_return_continuous(illustrative, q).point
    p_e, R_e = discrete_approx(illustrative, q, u_c)
    assert p_e == (773, 214)
    assert R_e == 11802500


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from(["repair", "concentrate"]))
def test_discrete_approx_is_feasible(seed, heuristic):
    inst = random_instance(seed)
    q = risk_form(inst)
    u_c = solve_max_return_continuous(inst, q).point
    p_e, R_e = discrete_approx(inst, q, u_c, heuristic)
    assert is_feasible(inst, q, p_e)
    assert R_e == return_value(inst, p_e)
    assert R_e <= math.floor(float(np.dot(inst.mu, u_c)) + 1e-6)


def test_concentrate_on_mixed_example():
    inst = mixed_instance(5_000_000)
    q = risk_form(inst)
    u_c = solve_max_return_continuous(inst, q).point
    p_e, _ = discrete_approx(inst, q, u_c, "concentrate")
    assert p_e[2] == 3  # the future contract gets its rounded-up continuous amount
    p_r, _ = discrete_approx(inst, q, u_c, "repair")
    assert p_r == (1192, 0, 2)


@given(st.lists(st.tuples(st.integers(0, 100), st.integers(0, 100)), min_size=1, max_size=5),
       st.floats(0.01, 0.99))
def test_fictitious_bounds(pairs, alpha):
    b = [min(p) for p in pairs]
    pe = [max(p) for p in pairs]
    f = fictitious_bounds(b, pe, alpha)
    assert all(lo <= v <= hi for lo, v, hi in zip(b, f, pe))
    assert fictitious_bounds([753, 191], [773, 214]) == (763, 202)


def test_new_polytope_reproduces_illustrative_cuts(illustrative):
    q = risk_form(illustrative)
    poly = Polytope.initial(illustrative, 11809715, R_floor=11802500, lower=(753, 191))
    poly, recs, r_m = new_polytope(poly, q, (773, 214), 0.0, 3e-5, 2, 3, "nearest")
    assert [(r.cut.normal, r.cut.rhs) for r in recs] == [((545, 455), 519114),
                                                          ((567, 433), 531402)]
    assert recs[0].p_max == pytest.approx((753, 479443 / 2000))
    assert recs[1].p_max == pytest.approx((1979943 / 2500, 191))
    assert r_m < recs[1].r_m_sq


def test_new_polytope_respects_tolerance(illustrative):
    q = risk_form(illustrative)
    poly = Polytope.initial(illustrative, 11809715, R_floor=11802500, lower=(753, 191))
    _, recs, _ = new_polytope(poly, q, (773, 214), 1e-4, 3e-5, 4)
    assert recs == []


def test_tree_search_trace(illustrative):
    q = risk_form(illustrative)
    poly = Polytope.initial(illustrative, 11809715, R_floor=11802500, lower=(753, 191))
    sys = build_slack_system(illustrative, poly)
    ts = groebner_test_set(sys)
    p_ini = reduce_point(sys.start_point(), ts)
    lines = []
    state = SearchState(incumbent=(773, 214), incumbent_gap=7215, max_num_nodes=100)
    sw_nodes, improved, best = tree_search(p_ini, ts, sys, q, illustrative, state, lines.append)
    assert not sw_nodes and improved
    assert best == (779, 207)
    assert state.incumbent_gap == 2215
    assert "node (787,197) delta1=2215 action=new" in lines
    assert "node (779,207) delta1=2215 action=feasible-improve" in lines
    assert any("(792,190)" in ln and "pruned-bound" in ln for ln in lines)
    assert 1 <= state.nodes_processed <= 20


def test_tree_search_node_cap(illustrative):
    q = risk_form(illustrative)
    poly = Polytope.initial(illustrative, 11809715, R_floor=11802500, lower=(753, 191))
    sys = build_slack_system(illustrative, poly)
    ts = groebner_test_set(sys)
    p_ini = reduce_point(sys.start_point(), ts)
    state = SearchState(incumbent=(773, 214), incumbent_gap=7215, max_num_nodes=1)
    sw_nodes, _, _ = tree_search(p_ini, ts, sys, q, illustrative, state)
    assert sw_nodes and state.nodes_processed == 1


# --------------------------------------------------------------------------
# driver


def test_illustrative_optimum(illustrative):
    rep = discrete_optimum(illustrative)
    assert tuple(rep.optimum) == (779, 207)
    assert rep.gap == 2215 and rep.proven and rep.status == "ok"
    assert rep.invested + rep.uninvested == illustrative.B
    assert rep.uninvested == 3624840


def test_zero_risk_gives_empty_portfolio():
    inst = Instance((3, 5), (4, 7), [[2.0, 0.5], [0.5, 1.0]], 50, 0.0)
    rep = discrete_optimum(inst)
    assert tuple(rep.optimum) == (0, 0) and rep.ret == 0


def test_oracle_refuses_large_boxes():
    inst = mixed_instance(10_000_000)
    with pytest.raises(TooLarge):
        brute_force_optimum(inst, EnumerationBudget(max_points=1000))


@settings(max_examples=50, derandomize=True)
@given(st.integers(0, 10**6), st.sampled_from(["repair", "concentrate"]))
def test_oracle_equivalence(seed, heuristic):
    """Same optimal return as exhaustive enumeration; the optimum is feasible."""
    inst = random_instance(seed)
    rep = discrete_optimum(inst, SearchConfig(approx_heuristic=heuristic))
    _, ret, _ = brute_force_optimum(inst)
    q = risk_form(inst)
    assert rep.status == "ok"
    assert is_feasible(inst, q, rep.optimum)
    assert rep.ret == ret == return_value(inst, rep.optimum)


@settings(max_examples=10, derandomize=True)
@given(st.integers(0, 10**6))
def test_oracle_equivalence_other_settings(seed):
    inst = random_instance(seed)
    cfg = SearchConfig(tie_break="grevlex", rhs_rounding="ceil", max_num_cuts=1, truncate=False)
    rep = discrete_optimum(inst, cfg)
    assert rep.ret == brute_force_optimum(inst)[1]


def test_node_cap_switches_to_fictitious_bounds():
    inst = random_instance(32, n=4, B=2000)
    rep = discrete_optimum(inst, SearchConfig(max_num_nodes=1))
    fict = [p for p in rep.phases if p.sw_fict_bounds]
    assert fict and all(p.nodes <= 1 for p in rep.phases if p.kind == "search")
    assert not rep.proven and rep.status == "best-found"
    assert is_feasible(inst, risk_form(inst), rep.optimum)
    assert rep.ret >= rep.R_e
