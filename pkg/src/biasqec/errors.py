"""Exception types shared across the package."""


class BiasQecError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(BiasQecError):
    """Operands have incompatible shapes or an index is out of range."""


class LiftSizeError(BiasQecError):
    """Protographs or ring elements with different lift sizes were combined."""


class DomainError(BiasQecError):
    """A numeric argument is outside its valid domain."""


class NotACssCodeError(BiasQecError):
    """The given parity checks do not commute, so they define no CSS code."""


class UnsatisfiableSyndromeError(BiasQecError):
    """No error pattern reproduces the requested syndrome."""


class NoSolutionError(BiasQecError):
    """A solver found no solution in its search domain."""


class ParseError(BiasQecError):
    """A text input could not be parsed.

    Carries the 1-based line and column of the offending token when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
