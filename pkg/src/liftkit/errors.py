"""Exception hierarchy shared by all liftkit modules."""


class LiftkitError(Exception):
    """Base class for every error raised by liftkit."""


class NonSquare(LiftkitError, ValueError):
    pass


class DimensionMismatch(LiftkitError, ValueError):
    pass


class ZeroVector(LiftkitError, ValueError):
    pass


class BackendFailure(LiftkitError, RuntimeError):
    """The dense eigensolver did not converge."""


class DegenerateLift(LiftkitError, ArithmeticError):
    """The lifted nullvector has (numerically) no inflated component."""

    def __init__(self, message, xi=None, zeta=None):
        super().__init__(message)
        self.xi = xi
        self.zeta = zeta


class SpectralCollision(LiftkitError, ValueError):
    pass


class DivisionDegenerate(LiftkitError, ArithmeticError):
    pass


class ParseError(LiftkitError, ValueError):
    """Malformed Matrix Market input; ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class DimensionError(ParseError):
    pass
