"""Exception hierarchy shared by every module."""


class SymTestError(Exception):
    """Base class for all errors raised by symtest."""


class ParameterDomainError(SymTestError, ValueError):
    """A distribution or method parameter is outside its valid domain."""


class SampleSizeError(SymTestError, ValueError):
    """The sample is too small for the requested operation."""


class DegenerateSampleError(SymTestError, ValueError):
    """The sample has zero spread, so a scale-normalized statistic is undefined."""


class HullError(SymTestError, ArithmeticError):
    """Zero is not strictly inside the convex hull of the estimating values."""

    def __init__(self, vmin: float, vmax: float):
        self.vmin = vmin
        self.vmax = vmax
        super().__init__(
            f"zero is not strictly inside the convex hull: min={vmin:.6g}, max={vmax:.6g}"
        )


class NumericError(SymTestError, ArithmeticError):
    """An iterative numerical procedure failed to converge."""


class ParseError(SymTestError, ValueError):
    """A family specification string could not be parsed."""

    def __init__(self, text: str, pos: int, expected: str):
        self.text = text
        self.pos = pos
        self.expected = expected
        pointer = " " * pos + "^"
        super().__init__(f"at position {pos}: expected {expected}\n  {text}\n  {pointer}")
