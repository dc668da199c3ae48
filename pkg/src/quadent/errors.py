"""Exception and warning types raised across the package."""


class QuadentError(Exception):
    """Base class for all package errors."""


class NonUnitary(QuadentError, ValueError):
    pass


class BadTargets(QuadentError, ValueError):
    pass


class ShapeMismatch(QuadentError, ValueError):
    pass


class NotHermitian(QuadentError, ValueError):
    pass


class BadDim(QuadentError, ValueError):
    pass


class Unnormalized(QuadentError, ValueError):
    pass


class ArityMismatch(QuadentError, ValueError):
    pass


class BadArity(QuadentError, ValueError):
    pass


class ZeroVector(QuadentError, ValueError):
    pass


class NotAGateResource(QuadentError):
    """The resource is not maximally entangled across the requested pairing."""


class NotFound(QuadentError):
    pass


class NoCorrectionExists(QuadentError):
    """No Pauli word restores the target state for some measurement outcome."""


class NegativeResidual(UserWarning):
    """A residual-entanglement component came out clearly negative."""


class DegenerateContraction(UserWarning):
    """A single-qubit contraction vanished during coordinate ascent."""
