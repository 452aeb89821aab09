"""Exception types shared across the package."""


class InvarStepError(Exception):
    """Base class for all errors raised by this package."""


class NotSymmetric(InvarStepError):
    pass


class NoConvergence(InvarStepError):
    pass


class Overflow(InvarStepError):
    pass


class SingularShift(InvarStepError):
    """I - dt*A is singular (within tolerance) at the requested steplength."""


class DimensionMismatch(InvarStepError):
    pass


class NotInSet(InvarStepError):
    pass


class BranchPreconditionFailed(InvarStepError):
    """The case analysis behind a local threshold formula does not apply."""


class NotFlowInvariant(InvarStepError):
    pass


class InconsistentPair(InvarStepError):
    """The halfspace and generator descriptions disagree."""


class DegenerateCone(InvarStepError):
    pass


class SamplingExhausted(InvarStepError):
    pass


class PredicateFalseAtZero(InvarStepError):
    """The discrete invariance check fails even as dt -> 0+."""


class UnsupportedSet(InvarStepError):
    """The operation needs a representation the set value does not carry."""


class ParseError(InvarStepError):
    pass


class ValidationError(InvarStepError):
    pass
