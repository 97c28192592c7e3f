import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbportfolio import _completion_nb
from gbportfolio.convex import Polytope, TangentCut
from gbportfolio.errors import NegativeRhs, RankDeficient
from gbportfolio.lattice import kernel_membership, lattice_kernel_basis, same_lattice
from gbportfolio.oracle import brute_force_fiber_optimum, fiber_points
from gbportfolio.testset import (
    TIE_BREAKS,
    SlackSystem,
    TermOrder,
    _Completion,
    _canonical_sort,
    _check_rank,
    _interreduce,
    build_slack_system,
    groebner_test_set,
    is_reducible,
    read_test_set,
    reduce_point,
    structured_kernel_basis,
    write_test_set,
)

V_PRINTED = {
    (-4, 5, 8775, 0), (-1, 1, 2970, 2500), (0, -1, 3105, 10000),
    (1, -2, 135, 7500), (2, -3, -2835, 5000), (3, -4, -5805, 2500),
}
W_PRINTED = {
    (-4, 5, 8775, 0, -95, 103), (-1, 1, 2970, 2500, 90, 134),
    (0, -1, 3105, 10000, 455, 433), (1, -2, 135, 7500, 365, 299),
    (2, -3, -2835, 5000, 275, 165), (3, -4, -5805, 2500, 185, 31),
    (7, -9, -14580, 2500, 280, -72),
}


def _illustrative_system(illustrative, cuts=()):
    poly = Polytope.initial(illustrative, 11809715, R_floor=11802500, lower=(753, 191))
    for normal, rhs in cuts:
        poly = poly.add_cut(TangentCut(normal, rhs, 3))
    return build_slack_system(illustrative, poly)


def random_system(seed, n=None, n_cuts=None, rhs_scale=40):
    """Budget row, return row and optional mixed-sign cut rows."""
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(2, 4))
    n_cuts = int(rng.integers(0, 2)) if n_cuts is None else n_cuts
    a = tuple(int(v) for v in rng.integers(1, 12, n))
    mu = tuple(int(v) for v in rng.integers(1, 20, n))
    rows, kinds = [a, mu], ["budget", "return"]
    for _ in range(n_cuts):
        row = tuple(int(v) for v in rng.integers(-4, 10, n))
        if any(row) and row not in rows:
            rows.append(row)
            kinds.append("cut")
    rhs = tuple(int(v) for v in rng.integers(0, rhs_scale, len(rows)))
    return SlackSystem(tuple(rows), rhs, mu, tuple(range(n)), (0,) * n, tuple(kinds))


def random_fiber_point(sys, rng, top=6):
    return tuple(int(v) for v in rng.integers(0, top, sys.N))


# --------------------------------------------------------------------------
# printed example


def test_illustrative_six_vectors(illustrative):
    ts = groebner_test_set(_illustrative_system(illustrative))
    assert set(ts.as_tuples()) == V_PRINTED


def test_illustrative_seven_vectors_with_cuts(illustrative):
    sys = _illustrative_system(illustrative, [((545, 455), 519114), ((567, 433), 531402)])
    ts = groebner_test_set(sys)
    assert set(ts.as_tuples()) == W_PRINTED


def test_printed_vector_is_in_the_lattice(illustrative):
    sys = _illustrative_system(illustrative)
    assert kernel_membership(sys.A, (-1, 1, 2970, 2500))
    assert sys.N - sys.m == 2


def test_printed_reduction(illustrative):
    sys = _illustrative_system(illustrative)
    ts = groebner_test_set(sys)
    p = sys.start_point()
    assert tuple(a + b for a, b in zip(p, (753, 191, 0, 0))) == (753, 191, 3832470, 487215)
    red = reduce_point(p, ts)
    assert sys.portfolio(red) == (791, 192)
    assert red[2:] == (3598515, 2215)


def test_grevlex_orients_zero_cost_vector_like_printed(illustrative):
    ts = groebner_test_set(_illustrative_system(illustrative), tie_break="grevlex")
    assert (-4, 5, 8775, 0) in set(ts.as_tuples())
    assert len(ts) == 6


# --------------------------------------------------------------------------
# term order


@given(st.lists(st.integers(-50, 50), min_size=4, max_size=4),
       st.lists(st.integers(0, 9), min_size=4, max_size=4),
       st.lists(st.integers(0, 9), min_size=4, max_size=4),
       st.sampled_from(TIE_BREAKS))
def test_term_order_is_antisymmetric_and_cost_compatible(cost, u, v, tb):
    order = TermOrder.from_name(cost, tb)
    r = np.array(u) - np.array(v)
    assert order.sign(r) == -order.sign(-r)
    assert (order.sign(r) == 0) == (not r.any())
    c = int(np.dot(cost, r))
    if c:
        assert order.sign(r) == (1 if c < 0 else -1)
    assert order.signs(np.array([r, -r])).tolist() == [order.sign(r), order.sign(-r)]


def test_unknown_tie_break():
    with pytest.raises(ValueError):
        TermOrder.from_name((1, 2), "lex")


# --------------------------------------------------------------------------
# lattice


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_structured_basis_spans_the_kernel(seed):
    sys = random_system(seed, n_cuts=1)
    gens = structured_kernel_basis(sys.A0)
    assert all(kernel_membership(sys.A, g) for g in gens)
    assert same_lattice(gens, lattice_kernel_basis(sys.A))


def test_duplicate_cut_rows_rejected():
    sys = SlackSystem(((2, 3), (1, 1), (1, 2), (1, 2)), (9, 9, 9, 9), (1, 1), (0, 1), (0, 0),
                      ("budget", "return", "cut", "cut"))
    with pytest.raises(RankDeficient):
        _check_rank(sys)


def test_coinciding_budget_and_return_rows_allowed():
    sys = SlackSystem(((2, 3), (2, 3)), (9, 7), (2, 3), (0, 1), (0, 0), ("budget", "return"))
    ts = groebner_test_set(sys)
    for _ in range(5):
        p = random_fiber_point(sys, np.random.default_rng(_))
        assert reduce_point(p, ts) == brute_force_fiber_optimum(sys, p)


def test_negative_translated_rhs(illustrative):
    poly = Polytope.initial(illustrative, 11809715, lower=(2000, 2000))
    with pytest.raises(NegativeRhs):
        build_slack_system(illustrative, poly)


def test_repeated_and_constant_cuts_dropped(illustrative):
    poly = Polytope.initial(illustrative, 11809715, lower=(753, 191), fixed={1: 191})
    poly = poly.add_cut(TangentCut((0, 7), 5000, 3)).add_cut(TangentCut((5, 1), 9000, 3))
    poly = poly.add_cut(TangentCut((5, 2), 9000, 3))
    sys = build_slack_system(illustrative, poly)
    assert sys.row_kinds == ("budget", "return", "cut")
    assert sys.free == (0,)


# --------------------------------------------------------------------------
# completeness, confluence, implementations


@pytest.mark.parametrize("tie_break", TIE_BREAKS)
@settings(max_examples=25)
@given(seed=st.integers(0, 10**6))
def test_completeness_on_enumerable_fibers(tie_break, seed):
    """Normal form == term-order optimum of the fiber, for every fiber tried."""
    sys = random_system(seed)
    ts = groebner_test_set(sys, tie_break=tie_break)
    rng = np.random.default_rng(seed)
    for _ in range(4):
        p = random_fiber_point(sys, rng)
        best = brute_force_fiber_optimum(sys, p, tie_break=tie_break)
        assert reduce_point(p, ts) == best
        assert not is_reducible(best, ts)


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_every_non_optimal_fiber_point_is_improvable(seed):
    sys = random_system(seed, rhs_scale=15)
    ts = groebner_test_set(sys)
    p = random_fiber_point(sys, np.random.default_rng(seed), top=4)
    best = brute_force_fiber_optimum(sys, p)
    for y in fiber_points(sys, p):
        assert is_reducible(y, ts) == (y != best)


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_reduction_confluence(seed):
    sys = random_system(seed)
    ts = groebner_test_set(sys)
    rng = np.random.default_rng(seed)
    p = random_fiber_point(sys, rng, top=30)
    forms = {reduce_point(p, ts)} | {reduce_point(p, ts, rng=rng) for _ in range(4)}
    assert len(forms) == 1


@settings(max_examples=30)
@given(st.integers(0, 10**6), st.sampled_from(TIE_BREAKS))
def test_compiled_and_python_completion_agree(seed, tie_break):
    sys = random_system(seed)
    N = sys.N
    order = sys.order(tie_break)
    gens = structured_kernel_basis(sys.A0)
    for k, row in enumerate(sys.A0):
        if any(c < 0 for c in row):
            comp = _Completion(TermOrder.revlex_last(N, sys.n_free + k), N, 10**6, np.int64)
            gens = [tuple(int(x) for x in g) for g in comp.run(gens)]
    Vn, _, status = _completion_nb.complete(np.array(gens, dtype=np.int64), order, True, 10**6)
    assert status == _completion_nb.STATUS_OK
    comp = _Completion(order, N, 10**6, np.int64, saturated=True)
    Vp = comp.run(gens)
    a = _canonical_sort(_interreduce(np.asarray(Vn, dtype=np.int64), order))
    b = _canonical_sort(_interreduce(np.asarray(Vp, dtype=np.int64), order))
    assert a.tolist() == b.tolist()


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_truncated_set_is_complete_below_its_rhs(seed):
    sys = random_system(seed, rhs_scale=25)
    full = groebner_test_set(sys)
    trunc = groebner_test_set(sys, truncate=True)
    assert len(trunc) <= len(full)
    assert set(trunc.as_tuples()) <= set(full.as_tuples())
    rng = np.random.default_rng(seed)
    for _ in range(5):
        shift = tuple(int(v) for v in rng.integers(0, 3, sys.n_free))
        moved = sys.retranslate(tuple(b + s for b, s in zip(sys.translation, shift)))
        if min(moved.rhs) < 0:
            continue
        p = moved.start_point()
        assert reduce_point(p, trunc) == reduce_point(p, full)


def test_saturation_needed_for_negative_rows():
    # a cut with a negative coefficient: the plain structured generators
    # do not generate the lattice ideal, the saturated completion must
    sys = SlackSystem(((3, 4), (5, 2), (2, -3)), (30, 30, 6), (5, 2), (0, 1), (0, 0),
                      ("budget", "return", "cut"))
    ts = groebner_test_set(sys)
    assert any(k.startswith("saturate") for k in ts.stats)
    for p in [(0, 0, 30, 30, 6), (2, 3, 3, 14, 11), (5, 0, 15, 5, 0)]:
        assert reduce_point(p, ts) == brute_force_fiber_optimum(sys, p)


# --------------------------------------------------------------------------
# slack system plumbing and I/O


def test_extend_and_portfolio_are_inverse(illustrative):
    sys = _illustrative_system(illustrative)
    p = sys.extend((779, 207))
    assert sys.portfolio(p) == (779, 207)
    assert p[sys.return_slack] == 2215
    moved = sys.retranslate((770, 200))
    assert moved.portfolio(moved.extend((779, 207))) == (779, 207)
    assert moved.extend((779, 207))[2:] == p[2:]


def test_write_read_roundtrip(tmp_path, illustrative):
    sys = _illustrative_system(illustrative)
    ts = groebner_test_set(sys)
    path = tmp_path / "ts.txt"
    write_test_set(path, ts)
    back = read_test_set(path, ts.order)
    assert back.as_tuples() == ts.as_tuples()


def test_pair_ceiling_raises():
    from gbportfolio.errors import ResourceExhausted

    sys = SlackSystem(((35, 37, 4000), (4, 4, 10000)), (10**5, 10**5), (4, 4, 10000),
                      (0, 1, 2), (0, 0, 0), ("budget", "return"))
    with pytest.raises(ResourceExhausted):
        groebner_test_set(sys, max_pairs=50, tie_break="grevlex")
