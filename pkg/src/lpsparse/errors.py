"""Exception hierarchy.

``InputError`` subclasses describe malformed data (CLI exit 2);
``BoundViolation`` and ``MaxAttemptsExceeded`` are mathematical outcomes
(CLI exit 1).
"""


class LpSparseError(Exception):
    pass


class InputError(LpSparseError, ValueError):
    pass


class ParseError(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class NonFiniteValue(InputError):
    pass


class EmptySpace(InputError):
    pass


class NegativeWeight(InputError):
    pass


class WeightSumNotOne(InputError):
    pass


class PLessThanOne(InputError):
    pass


class NonpositiveP(InputError):
    pass


class BadP(InputError):
    pass


class BadEpsilon(InputError):
    pass


class TooFewSamples(InputError):
    pass


class ZeroCoefficients(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class NotCentered(InputError):
    pass


class NormExceeded(InputError):
    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class CapExceeded(LpSparseError):
    """An exhaustive enumeration would exceed its configured size cap."""


class MaxAttemptsExceeded(LpSparseError):
    """Rejection sampling ran out of attempts without finding a witness."""
