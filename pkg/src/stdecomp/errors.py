"""Exception and warning types raised across the package."""


class StdError(Exception):
    """Base class for data errors raised by stdecomp."""


class LengthNotMultiple(StdError, ValueError):
    pass


class PeriodTooLarge(StdError, ValueError):
    pass


class SeriesTooShort(StdError, ValueError):
    pass


class ZeroVariance(StdError, ValueError):
    pass


class AllZeroSeries(StdError, ValueError):
    pass


class NonPositiveSeries(StdError, ValueError):
    pass


class HorizonTooLarge(StdError, ValueError):
    pass


class InconsistentLabels(StdError, ValueError):
    pass


class EmptyGroup(StdError, LookupError):
    pass


class AllZeroActuals(StdError, ValueError):
    pass


class UnstableIntegration(StdError, ArithmeticError):
    pass


class ParseError(StdError, ValueError):
    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class MissingValue(ParseError):
    pass


class EmptyFile(StdError, ValueError):
    pass


class StdWarning(UserWarning):
    """Base class for recoverable conditions (truncation, degeneracy, clamping)."""


class TruncationWarning(StdWarning):
    pass


class DegenerateCycleWarning(StdWarning):
    pass


class SingleCycleWarning(StdWarning):
    pass


class KTooLarge(StdWarning):
    pass
