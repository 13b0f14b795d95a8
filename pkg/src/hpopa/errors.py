"""Exception hierarchy shared by all hpopa modules."""


class HpOpaError(Exception):
    """Base class for every error raised by hpopa."""


class DomainError(HpOpaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateInputError(HpOpaError, ValueError):
    """The input is degenerate (e.g. the zero function) for the operation."""


class PreconditionError(HpOpaError, ValueError):
    """A stated hypothesis of a theorem-based check does not hold."""


class ConstantOpaError(HpOpaError):
    """The degree-one OPA collapsed to a constant, so it has no root."""


class NotApplicable(HpOpaError):
    """A bound's hypotheses exclude this instance; the check is skipped."""


class InconsistentInputError(HpOpaError, ValueError):
    """Inputs that no valid OPA computation could have produced."""
