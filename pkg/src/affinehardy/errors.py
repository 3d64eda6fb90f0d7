"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Parameters outside the domain of an operation."""


class PreconditionError(ValueError):
    """A theorem's hypothesis does not hold for the supplied symbol."""


class NumericalFailure(ArithmeticError):
    """A numerical routine failed to reach its accuracy contract."""
