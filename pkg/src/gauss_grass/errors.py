"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GaussGrassError(Exception):
    """Base class for all errors raised by :mod:`gauss_grass`."""


class FieldError(GaussGrassError, ValueError):
    """Invalid coefficient field (non-prime or out-of-range modulus)."""


class ParseError(GaussGrassError, ValueError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
            if text:
                message += f": {text!r}"
        super().__init__(message)


class UnknownParameterError(ParseError):
    pass


class RingMismatchError(GaussGrassError, ValueError):
    """Operands live over different parameter lists or fields."""


class DivisionByZeroError(GaussGrassError, ZeroDivisionError):
    pass


class InconsistentSystemError(GaussGrassError, ArithmeticError):
    """A linear system has no solution over the rational-function field."""


class DimensionError(GaussGrassError, ValueError):
    pass


class ChartError(GaussGrassError, ValueError):
    """A point or plane lies outside the chart it is being expressed in."""


class ConstantFamilyError(GaussGrassError):
    def __init__(self, message: str = "parameters do not move the plane"):
        super().__init__(message)


class SingularPointError(GaussGrassError):
    """The Jacobian drops rank at the requested sample point."""


class IterationError(GaussGrassError):
    def __init__(self, step: int, cause: Exception):
        self.step = step
        self.cause = cause
        super().__init__(f"step {step}: {cause}")


class SchemaError(GaussGrassError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
