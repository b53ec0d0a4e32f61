"""Exception types shared across the package.

Two families: precondition violations (bad input; CLI exit code 2) and
numerical failures (well-posed input, but the requested object does not
exist or the computation cannot proceed; CLI exit code 3).
"""


class PreconditionError(Exception):
    """Input violates a documented precondition."""


class NumericalFailure(Exception):
    """The computation is well posed but fails numerically."""


class NonMonotone(PreconditionError):
    """Angle function violates phi' > 0 somewhere on the grid."""


class ZeroParam(PreconditionError):
    """Transformation parameter must be nonzero."""


class NegativeProjective(PreconditionError):
    """Projective transformation parameter must be positive."""


class Degenerate(PreconditionError):
    """Construction requires two distinct curve points or parameters."""


class DegeneratePoints(PreconditionError):
    """Cross-ratio stencil contains coincident points or a zero offset."""


class Resonant(NumericalFailure):
    """Periodic linear solve rejected: homogeneous multiplier within tolerance of 1."""


class NoRealFixedPoints(NumericalFailure):
    """Monodromy is elliptic or parabolic; no real periodic branch exists."""


class BranchSingular(NumericalFailure):
    """Requested branch is only partially defined (linearizing solution vanishes)."""


class StepUnstable(NumericalFailure):
    """Time step rejected: solution norm doubled within one step."""


class BranchJump(NumericalFailure):
    """Branch tracking along a flow lost continuity."""


class MatchFailure(NumericalFailure):
    """No branch matches the predicted meeting point within tolerance."""
