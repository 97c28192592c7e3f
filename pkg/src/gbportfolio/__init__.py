"""Integer mean-variance portfolios via Gröbner-basis test sets and tangent cuts.

Maximize mu.x subject to a.x <= B, x^T C x <= B^2 r0^2 (C = D Omega D with
D = diag(a)) over non-negative integer x.  The risk ellipsoid is enclosed in a
polytope of tangent cuts, the linear integer program over that polytope is
solved exactly with a Gröbner-basis test set, and a tree search walks down
from the linear optimum with the reversed test vectors until a point inside
the ellipsoid is found.
"""

from .convex import border_risk, solve_max_return_continuous
from .errors import PortfolioError, ResourceExhausted
from .instance import Instance, is_feasible, risk_form, scale_instance, validate_instance
from .oracle import brute_force_optimum
from .report import PhaseRecord, SolveReport
from .search import SearchConfig, discrete_approx, discrete_optimum
from .testset import SlackSystem, TestSet, TermOrder, groebner_test_set, reduce_point

__version__ = "0.1.0"

__all__ = [
    "Instance", "validate_instance", "risk_form", "scale_instance", "is_feasible",
    "border_risk", "solve_max_return_continuous",
    "SlackSystem", "TermOrder", "TestSet", "groebner_test_set", "reduce_point",
    "SearchConfig", "discrete_approx", "discrete_optimum",
    "SolveReport", "PhaseRecord", "brute_force_optimum",
    "PortfolioError", "ResourceExhausted",
]
