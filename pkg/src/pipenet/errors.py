"""Exception hierarchy shared by all pipenet modules."""


class PipenetError(Exception):
    """Base class for all pipenet errors."""


class DomainError(PipenetError, ValueError):
    """A physical quantity left its admissible domain (e.g. p <= 0)."""


class ConfigurationError(PipenetError, ValueError):
    """Inconsistent or incomplete model/network description."""


class NumericalError(PipenetError, RuntimeError):
    """A numerical procedure failed (divergence, singularity, ill-conditioning)."""


class ParseError(PipenetError, ValueError):
    """Syntax or semantic error in a network description file."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}" + (f", col {column}" if column is not None else "") + f": {message}"
        super().__init__(message)
