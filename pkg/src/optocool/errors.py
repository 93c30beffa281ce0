"""Exception hierarchy shared by all optocool modules."""


class OptocoolError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(OptocoolError, ValueError):
    """Invalid or inconsistent input parameters."""


class PurelyDispersiveError(OptocoolError):
    """Quantity undefined for purely dispersive coupling (B = 0)."""


class EffectiveDampingError(OptocoolError):
    """Effective damping is nonpositive (quantum-noise-level instability)."""


class InstabilityError(OptocoolError):
    """The drift matrix has an eigenvalue with nonnegative real part."""


class IllConditionedError(OptocoolError):
    """A per-frequency linear solve exceeded the condition-number limit."""

    def __init__(self, omega, message=None):
        self.omega = omega
        super().__init__(message or f"ill-conditioned solve at omega={omega!r}")


class LyapunovError(OptocoolError):
    """Steady-state covariance solve failed or produced an unphysical result."""


class NoInteriorMinimumError(OptocoolError):
    """Closed-form optimum falls outside its validity regime."""


class NoStablePointError(OptocoolError):
    """No stable feasible point found in the search region."""
