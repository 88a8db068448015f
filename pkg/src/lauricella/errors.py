"""Exception types raised by the evaluators."""


class PoleError(ValueError):
    """A Gamma-function argument sits on a pole (0, -1, -2, ...)."""


class ParameterError(ValueError):
    """A parameter violates a structural precondition (e.g. c = 0, -1, ...)."""


class DomainError(ValueError):
    """The evaluation point lies outside the supported region."""


class ConvergenceConditionError(DomainError):
    """A closed form at unit argument needs a positive parameter excess."""


class DegenerateGeometryError(DomainError):
    """Point configuration too close to a singular set."""


class WeightSignError(ArithmeticError):
    """A(k, n) - B(k, n) came out negative; the identity needs it >= 0."""
