"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class ResourceLimitError(RuntimeError):
    """A configured size cap was exceeded.

    ``cap`` is the limit that was hit and ``count`` how far the computation got
    before stopping.
    """

    def __init__(self, message, cap, count=None):
        super().__init__(message)
        self.cap = cap
        self.count = count


class ContractError(ValueError):
    """An argument violates a documented precondition."""
