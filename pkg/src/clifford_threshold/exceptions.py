"""Exception hierarchy shared by every module."""


class CliffordThresholdError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgumentError(CliffordThresholdError, ValueError):
    """Input outside the documented domain (non-finite angles, p outside [0, 1], ...)."""


class InternalConsistencyError(CliffordThresholdError, RuntimeError):
    """A computed object failed an invariant that holds by construction. Signals a bug."""


class SolverFailure(CliffordThresholdError, RuntimeError):
    """The simplex solver hit its pivot cap. Distinct from an infeasible verdict."""


class ZeroProbabilityBranch(CliffordThresholdError, ValueError):
    """The requested measurement outcome has (numerically) zero probability."""


class TheoremViolation(CliffordThresholdError, RuntimeError):
    """A sampled rotation contradicts the dominance theorem or one of its proof steps."""
