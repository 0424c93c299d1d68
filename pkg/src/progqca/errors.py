"""Exception types shared across the package."""


class ProgqcaError(Exception):
    """Base class for all package errors."""


class InvalidDigitError(ProgqcaError):
    """A basis digit is out of range for its site."""


class LayoutError(ProgqcaError):
    """A site layout is malformed or exceeds the memory budget."""


class UnitarityError(ProgqcaError):
    """A matrix failed the unitarity check; carries the deviation."""

    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation


class SizingError(ProgqcaError):
    """A ring is too small to run a program without interference."""

    def __init__(self, message: str, minimal_ring: int):
        super().__init__(message)
        self.minimal_ring = minimal_ring


class ParseError(ProgqcaError):
    """A structured-text document failed to parse; carries position info."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedGateError(ProgqcaError):
    """A named gate has no verified realization available."""
