"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live on incompatible registers."""


class BudgetError(ValueError):
    """A dense construction would exceed the configured size budget."""


class NotNormalizedError(ValueError):
    """A routine that assumes a normalized state received one that is not."""


class NotCliffordError(ValueError):
    """A unitary fails to map some displacement onto a displacement."""


class StateFileError(ValueError):
    """A state file could not be parsed."""
