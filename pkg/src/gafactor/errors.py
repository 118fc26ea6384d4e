"""Exception hierarchy for gafactor."""


class GaFactorError(Exception):
    """Base class for every error raised by this package."""


class PrimeInput(GaFactorError):
    """The number handed to a factorizer is prime."""


class EmptySearchSpace(GaFactorError):
    """The shrunk factor interval is empty (input is not a balanced semiprime)."""


class CapacityExceeded(GaFactorError):
    """A size argument lies outside the supported integer range."""


class WidthMismatch(GaFactorError):
    pass


class IntervalTooSmall(GaFactorError):
    pass


class EmptySieveSpace(GaFactorError):
    pass


class ParseError(GaFactorError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


class VerificationError(GaFactorError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)
