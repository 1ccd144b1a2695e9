"""Exception hierarchy shared by all modules."""


class AdiabaticError(Exception):
    """Base class for errors raised by this package."""


class StateError(AdiabaticError, ValueError):
    """A state is malformed or does not belong to the model's spaces."""


class UnsupportedQuery(AdiabaticError):
    """The relation model cannot decide the requested compound query."""


class NonMonotoneError(AdiabaticError):
    """A predicate that must be monotone in its parameter was not."""


class ModelDefectError(AdiabaticError):
    """The model violates a structural precondition (e.g. N2 or closure)."""


class SingularIntegrandError(AdiabaticError, ArithmeticError):
    """A quadrature integrand hit a zero denominator or non-positive temperature."""


class SimulationError(AdiabaticError, RuntimeError):
    """An ODE run aborted (step constraint, unphysical state, or no convergence)."""
