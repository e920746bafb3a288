"""Exception hierarchy shared by all nugh modules."""


class NughError(Exception):
    """Base class for all library errors."""


class DomainError(NughError, ValueError):
    """An argument lies outside the supported domain."""


class ConvergenceError(NughError, ArithmeticError):
    """A series, quadrature or extrapolation failed to meet its tolerance."""


class BranchError(NughError, ArithmeticError):
    """Continuous-branch tracking of a logarithm could not be certified."""


class RangeError(NughError, ValueError):
    """A requested range, cutoff or window is insufficient."""


class TruncationError(NughError, ArithmeticError):
    """The characteristic function has not decayed at the truncation point."""


class AliasError(NughError, ArithmeticError):
    """Fourier inversion produced evidence of aliasing or misconfiguration."""


class BracketError(NughError, ArithmeticError):
    """Root bracketing exhausted its search interval."""


class ParseError(NughError, ValueError):
    """An input file could not be parsed."""

    def __init__(self, row, reason):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class InsufficientData(NughError, ValueError):
    """Too few observations for the requested operation."""
