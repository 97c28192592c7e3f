import pathlib

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gbportfolio import Instance

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True
)
settings.load_profile("default")

# two-asset worked example (returns scaled so that everything is integral)
ILLUSTRATIVE_OMEGA = [[0.832843e-4, 0.485325e-4], [0.485325e-4, 0.651298e-3]]

# three-asset stock/future mix, prices and returns multiplied by 100
MIXED_OMEGA = [
    [0.003250634, 0.000654331, 0.022513263],
    [0.000654331, 0.001578359, -0.006610861],
    [0.022513263, -0.006610861, 26.35846804],
]


@pytest.fixture(scope="session")
def illustrative():
    return Instance((6075, 3105), (12500, 10000), ILLUSTRATIVE_OMEGA, 9_000_000, 3e-5,
                    ("x1", "x2"))


def mixed_instance(B):
    return Instance((3522, 3676, 400000), (364, 364, 1000000), MIXED_OMEGA, B, 1.52,
                    ("MSFT", "GE", "Oil"))


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def random_spd(rng, n):
    M = rng.normal(size=(n, n))
    return M @ M.T / n + 0.1 * np.eye(n)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernel():
    # compile the numba completion once so that timing-sensitive tests do not
    # pay for it
    from gbportfolio.testset import SlackSystem, groebner_test_set

    sys = SlackSystem(((2, 3), (1, 1)), (10, 10), (1, 1), (0, 1), (0, 0), ("budget", "return"))
    groebner_test_set(sys)
