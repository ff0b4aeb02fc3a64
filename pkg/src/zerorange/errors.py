"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class InvalidProfileError(InvalidInputError):
    """A mass profile is non-physical (non-positive inverse mass)."""


class NumericalFailureError(RuntimeError):
    """A numerical routine could not reach its requested accuracy."""


class SingularCoefficientError(NumericalFailureError):
    """The leading ODE coefficient vanished inside the integration interval."""
