"""Exception hierarchy shared by every gaussmet module."""


class GaussmetError(Exception):
    """Base class for all errors raised by gaussmet."""


class InvalidInputError(GaussmetError, ValueError):
    """Argument has the wrong shape, sign, or structure."""


class NumericalError(GaussmetError, ArithmeticError):
    """A numerical routine failed or produced an unusable result.

    Attributes:
        cm: optional covariance matrix that triggered the failure
    """

    def __init__(self, message, cm=None):
        super().__init__(message)
        self.cm = cm


class TruncationError(NumericalError):
    """Fock-space truncation leaks more population than allowed.

    Attributes:
        leak: population lost beyond the cutoff
        suggested_dim: a truncation that brings the leak under tolerance
    """

    def __init__(self, message, leak, suggested_dim):
        super().__init__(f"{message} (leak={leak:.3g}, try dim={suggested_dim})")
        self.leak = leak
        self.suggested_dim = suggested_dim


class StateParseError(InvalidInputError):
    """A serialized state record could not be parsed."""

    def __init__(self, message, lineno):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConfigurationError(InvalidInputError):
    """Sampler parameter ranges reject (almost) every candidate."""
