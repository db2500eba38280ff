"""Exception hierarchy for the recovery-control library."""


class RecoveryError(Exception):
    """Base class for all library errors."""


class OutOfRangeError(RecoveryError, ValueError):
    """A strength or probability argument lies outside [0, 1] or is not finite."""


class NonConvergenceError(RecoveryError, RuntimeError):
    """The Jacobi eigensolver did not reach its off-diagonal tolerance."""


class NotPSDError(RecoveryError, ValueError):
    """Matrix has an eigenvalue below the positive-semidefinite tolerance."""


class DegenerateBranchError(RecoveryError, ArithmeticError):
    """A measurement branch has (numerically) zero success probability."""


class DegenerateTotalError(RecoveryError, ArithmeticError):
    """All branches together have (numerically) zero success probability."""


class InfeasibleError(RecoveryError, ValueError):
    """Requested parameters violate the complete-recovery feasibility bound."""


class ZeroStrengthError(InfeasibleError):
    """Complete recovery requires a strictly positive pre-measurement strength."""


class EmptyGridError(RecoveryError, ValueError):
    """A sweep specification produced no grid cells."""


class EmptyInputError(RecoveryError, ValueError):
    """An operation received an empty collection where data is required."""
