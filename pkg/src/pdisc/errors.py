"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PDiscError(Exception):
    """Base class for all package-specific errors."""


class ParseError(PDiscError):
    """Syntax or binding error in a vector-field source file.

    Carries 1-based line and column of the offending token when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class InputError(PDiscError):
    """Invalid user input outside the parser (bad parameters, bounds, paths)."""


class PositiveDimensionalError(PDiscError):
    """The solution set of P = Q = 0 contains a curve, not isolated points."""


class LineOfEquilibriaError(PDiscError):
    """A chart's equator restriction vanishes identically (equator of equilibria)."""


class InternalInvariantError(PDiscError):
    """A soundness recheck failed; results cannot be trusted.

    Raised for example when a reported cofactor does not satisfy
    X(f) = K*f on re-verification.  The CLI maps this to exit code 3.
    """
