"""Exception hierarchy shared across the package."""


class ScqrError(Exception):
    """Base class for all errors raised by scqr."""


class DomainError(ScqrError, ValueError):
    """An argument lies outside the physical domain (e.g. T <= 0)."""


class SolverError(ScqrError):
    """Steady-state solve failed.

    ``t_h`` is filled in when the failure happened inside a sweep.
    """

    def __init__(self, message: str, t_h: float | None = None):
        super().__init__(message)
        self.t_h = t_h


class DegenerateKernel(SolverError):
    """The Liouvillian kernel is not one-dimensional."""


class NumericalFailure(SolverError):
    """The computed state does not satisfy L rho = 0 to tolerance."""


class InvertedPopulation(ScqrError, ValueError):
    """Excited population >= ground population; no positive temperature exists."""


class NonThermalStateWarning(UserWarning):
    """Reduced state carries coherences, so a temperature is only approximate."""


class NoSignChange(ScqrError, ValueError):
    """Bracket endpoints do not straddle the refrigeration threshold."""


class ConfigError(ScqrError, ValueError):
    """Invalid configuration document. ``key`` names the offending entry."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class MissingField(ConfigError):
    pass


class BadKind(ConfigError):
    pass


class NonPositiveValue(ConfigError):
    pass
