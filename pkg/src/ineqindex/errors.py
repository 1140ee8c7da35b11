"""Error taxonomy, keyed by the cause of failure.

Every class derives from :class:`InequalityError` (itself a ``ValueError``) so
callers can catch the family at once, while the CLI reports the class name to
tell the user which definition failed.
"""


class InequalityError(ValueError):
    """Base class for domain errors raised by this package."""


class InvalidSample(InequalityError):
    pass


class AllZero(InequalityError):
    pass


class NonPositiveMean(InequalityError):
    pass


class NonPositiveSum(InequalityError):
    pass


class ZeroMean(InequalityError):
    pass


class NonPositiveValue(InequalityError):
    pass


class TiedValues(InequalityError):
    pass


class InvalidProbabilities(InequalityError):
    pass


class LambdaOne(InequalityError):
    pass


class DegenerateIndex(InequalityError):
    pass


class OracleSizeExceeded(InequalityError):
    """An O(N^2) routine was called on a sample larger than its default cap."""


class InvalidSpec(InequalityError):
    pass


class InvalidAlpha(InequalityError):
    pass


class OutOfRange(InequalityError):
    pass


class InvalidConfig(InequalityError):
    pass


class EmptyGroup(InequalityError):
    pass


class ZeroTotal(InequalityError):
    pass


class ParseError(InequalityError):
    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class EmptyColumn(InequalityError):
    pass


class OverlappingBins(InequalityError):
    pass


class OpenBinNotLast(InequalityError):
    pass


class NegativeCount(InequalityError):
    pass


class MissingTopMean(InequalityError):
    pass
