import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbportfolio.errors import (
    AsymmetricCovariance,
    DimensionMismatch,
    NegativeBudget,
    NegativeReturn,
    NegativeRisk,
    NonPositivePrice,
    NotPositiveDefinite,
)
from gbportfolio.instance import (
    Instance,
    budget_value,
    is_feasible,
    return_value,
    risk_form,
    risk_value,
    scale_instance,
    validate_instance,
)

OM = [[2.0, 0.5], [0.5, 1.0]]


def test_valid_instance_roundtrip():
    inst = validate_instance(Instance((3, 5), (4, 7), OM, 100, 0.1))
    assert inst.n == 2
    assert inst.a == (3, 5) and inst.mu == (4, 7)
    assert inst.label(1) == "x2"


@pytest.mark.parametrize(
    "kwargs, exc",
    [
        (dict(a=(0, 5)), NonPositivePrice),
        (dict(mu=(-1, 7)), NegativeReturn),
        (dict(B=-1), NegativeBudget),
        (dict(r0_sq=-0.1), NegativeRisk),
        (dict(omega=[[1.0, 0.2], [0.3, 1.0]]), AsymmetricCovariance),
        (dict(omega=[[1.0, 2.0], [2.0, 1.0]]), NotPositiveDefinite),
        (dict(omega=[[1.0]]), DimensionMismatch),
        (dict(mu=(1, 2, 3)), DimensionMismatch),
    ],
)
def test_validation_errors(kwargs, exc):
    base = dict(a=(3, 5), mu=(4, 7), omega=OM, B=100, r0_sq=0.1)
    base.update(kwargs)
    with pytest.raises(exc):
        validate_instance(Instance(**base))


def test_non_integer_price_rejected():
    with pytest.raises(ValueError):
        Instance((3.5, 5), (4, 7), OM, 100, 0.1)


def test_risk_form_matches_definition():
    inst = Instance((3, 5), (4, 7), OM, 100, 0.1)
    q = risk_form(inst)
    x = np.array([2, 3])
    ax = np.array(inst.a) * x
    assert q(x) == pytest.approx(ax @ np.array(OM) @ ax)
    assert q.cap == pytest.approx(0.1 * 100**2)
    assert risk_value(q, (2, 3)) == pytest.approx(q(x))


def test_exact_integer_evaluation_large_values():
    big = 10**30
    inst = Instance((big, 1), (big + 1, 2), OM, 3 * big, 1.0)
    assert return_value(inst, (2, 5)) == 2 * (big + 1) + 10
    assert budget_value(inst, (2, 5)) == 2 * big + 5


@given(st.integers(0, 6), st.integers(0, 6))
def test_scaling_keeps_feasible_set(x1, x2):
    inst = Instance((3, 5), (4, 7), OM, 40, 0.2)
    scaled = scale_instance(inst, 2)
    assert scaled.B == 4000 and scaled.a == (300, 500)
    q, qs = risk_form(inst), risk_form(scaled)
    assert is_feasible(inst, q, (x1, x2)) == is_feasible(scaled, qs, (x1, x2))
    assert return_value(scaled, (x1, x2)) == 100 * return_value(inst, (x1, x2))
