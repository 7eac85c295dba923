"""Exception hierarchy shared by the library and the CLI."""


class GraphonError(Exception):
    """Base class for every error raised by this package."""


class KernelValidationError(GraphonError, ValueError):
    """Input violates a structural invariant (shape, symmetry, weights, range)."""


class NotAGraphonError(KernelValidationError):
    """A [0, 1]-valued graphon was required but a general kernel was supplied."""


class SchemaError(KernelValidationError):
    """A file does not match its documented schema."""


class ExactLimitExceeded(GraphonError):
    """Exact enumeration was requested beyond the configured block limit."""


class BudgetExceeded(GraphonError):
    """Homomorphism-density enumeration would exceed its budget."""


class NonConvergenceError(GraphonError, ArithmeticError):
    """An iterative eigensolver failed to reach its tolerance within the cap."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
