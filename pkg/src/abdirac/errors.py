"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class UsageError(ValueError):
    """Inputs are individually valid but cannot be combined as requested."""


class AccuracyError(ArithmeticError):
    """A quadrature grid cannot resolve the requested evaluation."""
