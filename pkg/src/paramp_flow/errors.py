"""Exception types raised by paramp_flow."""


class ParampFlowError(Exception):
    """Base class for all library errors."""


class ContractViolation(ParampFlowError, ValueError):
    """An argument breaks a documented precondition."""


class RegimeError(ParampFlowError, ValueError):
    """Parameters fall outside the below-threshold, near-resonance regime.

    The message names the violated inequality.
    """


class NumericalFailure(ParampFlowError, ArithmeticError):
    """An eigen-solver failed to converge."""

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size


class ResourceLimitError(ParampFlowError, MemoryError):
    """A requested matrix exceeds the configured size cap."""


class TruncationError(ParampFlowError, ValueError):
    """A Fock-space computation would leak amplitude past the cutoff."""
