"""Exception types raised by phasewalk."""


class PhasewalkError(Exception):
    """Base class for package errors."""


class BoundaryOverflowError(PhasewalkError, ValueError):
    """Amplitude would leave an open lattice."""


class NumericalError(PhasewalkError, ArithmeticError):
    """A numerical invariant (norm, convergence) was violated."""


class SingularCoinError(PhasewalkError, ValueError):
    """Transfer matrix undefined because cos(theta) = 0."""


class DegenerateParameterError(PhasewalkError, ValueError):
    """Gapless or singular walk parameters, or a degenerate energy."""


class ExtendedStateError(PhasewalkError, ValueError):
    """Energy lies inside a band, so there is no decaying transfer eigenvalue."""


class TruncationError(PhasewalkError, ValueError):
    """Lattice window too small for the requested accuracy."""


class DiagonalizationError(PhasewalkError, ArithmeticError):
    """Dense eigensolver did not converge."""
