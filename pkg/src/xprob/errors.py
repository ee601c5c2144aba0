"""Exception hierarchy."""


class XProbError(Exception):
    """Base class for every error raised by xprob."""


class InvalidEventError(XProbError, ValueError):
    pass


class ConditioningOnNullError(XProbError, ZeroDivisionError):
    """The conditioning event has (numerically) zero value."""


class ValidationError(XProbError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SpaceMismatchError(XProbError, ValueError):
    pass


class SpaceTooLargeError(XProbError, ValueError):
    pass


class LPFailure(XProbError, RuntimeError):
    """The simplex solver did not terminate within its iteration budget."""


class RestartRequired(XProbError):
    """An observation fell outside the state space.

    The caller should rebuild a richer space (for instance ``space.extended_with(label)``)
    and start the analysis over.
    """

    def __init__(self, label):
        super().__init__(f"observation {label!r} is not in the state space; restart with a richer space")
        self.label = label
