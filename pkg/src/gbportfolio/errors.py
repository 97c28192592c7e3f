"""Exception hierarchy shared by all solver modules."""


class PortfolioError(Exception):
    """Base class for every error raised by this package."""


class InstanceError(PortfolioError, ValueError):
    """Invalid problem data."""


class AsymmetricCovariance(InstanceError):
    pass


class NotPositiveDefinite(InstanceError):
    pass


class NonPositivePrice(InstanceError):
    pass


class NegativeReturn(InstanceError):
    pass


class NegativeBudget(InstanceError):
    pass


class NegativeRisk(InstanceError):
    pass


class DimensionMismatch(InstanceError):
    pass


class Overflow(PortfolioError, OverflowError):
    pass


class Infeasible(PortfolioError):
    pass


class NumericalFailure(PortfolioError):
    pass


class EmptyPolytope(PortfolioError):
    pass


class NoIntersection(PortfolioError):
    pass


class DegenerateNormal(PortfolioError):
    pass


class EmptyIndexSet(PortfolioError):
    pass


class NegativeRhs(PortfolioError):
    pass


class RankDeficient(PortfolioError):
    pass


class ResourceExhausted(PortfolioError):
    """Gröbner completion hit its pair-queue ceiling.

    ``stats`` carries the partial counters at the moment of failure.
    """

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class TooLarge(PortfolioError):
    """The brute-force oracle refused an instance above its enumeration cap."""


class ParseError(PortfolioError, ValueError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.path = path
        self.line = line
