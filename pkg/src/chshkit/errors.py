"""Exception hierarchy shared across the package."""


class ChshError(Exception):
    """Base class for all errors raised by chshkit."""


class NotSymmetric(ChshError, ValueError):
    """Matrix is not (conjugate-)symmetric or has an unsupported shape."""


class NotPsd(ChshError, ValueError):
    """Matrix has a minimum eigenvalue below the allowed tolerance."""


class OutOfRange(ChshError, ValueError):
    """A correlation or model parameter lies outside its admissible range."""


class ConvergenceError(ChshError, ArithmeticError):
    """Iterative eigensolver did not converge within its sweep cap."""
