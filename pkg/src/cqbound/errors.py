"""Exception hierarchy.

All errors derive from :class:`CQBoundError`, itself a ``ValueError`` so
that callers validating user input can catch the builtin.
"""


class CQBoundError(ValueError):
    pass


class NotHermitian(CQBoundError):
    pass


class NoConvergence(CQBoundError):
    pass


class DimensionOverflow(CQBoundError):
    pass


class DimensionMismatch(CQBoundError):
    pass


class NotPSD(CQBoundError):
    pass


class TraceNotOne(CQBoundError):
    pass


class NotBlockDiagonal(CQBoundError):
    pass


class NotNormalized(CQBoundError):
    pass


class Unreachable(CQBoundError):
    pass


class OutOfRange(CQBoundError):
    pass


class EpsilonOutOfRange(OutOfRange):
    def __init__(self, eps, low, high, what="epsilon"):
        self.eps, self.low, self.high = eps, low, high
        super().__init__(f"{what}={eps!r} outside valid interval ({low}, {high}]")


class BadTruncationLevel(CQBoundError):
    pass


class MalformedState(CQBoundError):
    pass
