"""Exception types shared across the package."""


class KernelError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(KernelError, ValueError):
    """Malformed graph input or an invalid graph operation."""


class MatroidError(KernelError, ValueError):
    """Invalid matroid query or minor operation."""


class InstanceError(KernelError, ValueError):
    """An uncertain instance violates its declared invariants."""


class WeightOverflow(KernelError, OverflowError):
    """A weight sum left the unsigned 64-bit range."""


class ThresholdExceeded(KernelError):
    """The exhaustive cut-covering strategy refused an oversized instance."""


class BudgetExceeded(KernelError):
    """A verification plan asks for more instantiations than allowed."""


class InvariantViolation(KernelError, AssertionError):
    """A hard postcondition of a compressor did not hold."""
