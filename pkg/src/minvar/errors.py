"""Exception hierarchy shared by the library and the CLI."""


class MinvarError(Exception):
    """Base class for every error raised by :mod:`minvar`."""


class DimensionError(MinvarError, ValueError):
    """Operand shapes are incompatible."""


class NotUnderdeterminedError(DimensionError):
    """The system has at least as many equations as unknowns."""


class RankDeficientError(MinvarError, ValueError):
    """The coefficient matrix does not have full row rank."""


class DegenerateSystemError(MinvarError, ValueError):
    """``A u`` vanishes, so the minimum variance solution is not unique."""


class ParseError(MinvarError, ValueError):
    """Malformed matrix or vector file.

    ``line`` is 1-based and ``None`` when the problem is not tied to a line.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class UnsupportedFormatError(ParseError):
    """Valid Matrix Market header that this package does not handle."""
