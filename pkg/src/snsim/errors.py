"""Exception hierarchy for snsim.

All failures raised by this package derive from SnsimError so callers can
catch one type. Validation problems (bad arguments, inconsistent shapes,
broken configs) raise InvalidParameterError / ConfigurationError; runtime
breakdowns of the integrator raise NumericalFailureError, of which
BoundaryReflectionError is the special case where the wave packet reached
the edge of the computational domain.
"""


class SnsimError(Exception):
    """Base class for all snsim errors."""


class InvalidParameterError(SnsimError, ValueError):
    """An argument violates a documented precondition."""


class ConfigurationError(SnsimError, ValueError):
    """A run configuration is inconsistent or cannot be honored."""


class NumericalFailureError(SnsimError, RuntimeError):
    """The numerical scheme broke down (non-finite values, singular solve)."""


class BoundaryReflectionError(NumericalFailureError):
    """The wave packet reached the domain boundary during evolution.

    Carries the dimensionless time at which the guard tripped so the run
    can be diagnosed (enlarge the domain or shorten the evolution).
    """

    def __init__(self, message: str, t_tilde: float):
        super().__init__(message)
        self.t_tilde = t_tilde
