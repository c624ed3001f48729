"""Exception hierarchy shared across the package."""


class HBZerosError(Exception):
    """Base class for all errors raised by hbzeros."""


class InvariantViolation(HBZerosError, ValueError):
    pass


class UnsupportedOrder(HBZerosError, ValueError):
    pass


class NonFiniteIntegrand(HBZerosError, FloatingPointError):
    pass


class DimensionMismatch(HBZerosError, ValueError):
    pass


class DeltaTooLarge(HBZerosError, ValueError):
    """An iterate left the region |delta_n| < 1/4 where Q is defined."""


class UnsupportedArity(HBZerosError, ValueError):
    pass


class NoConvergence(HBZerosError, RuntimeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class OutOfRange(HBZerosError, ValueError):
    pass
