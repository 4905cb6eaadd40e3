"""Exception hierarchy used across the package."""


class BezoutError(Exception):
    """Base class for all errors raised by :mod:`bezout`."""


class DomainError(BezoutError, ValueError):
    """Evaluation point outside the closed unit disc (or zero for Laurent series)."""


class ShapeError(BezoutError, ValueError):
    """Incompatible matrix sizes or a non-analytic series where one is required."""


class NotPositiveError(BezoutError):
    """``T_G T_G^*`` (or a Laurent symbol on the circle) is not strictly positive.

    Attributes
    ----------
    ladder : list of (int, float)
        Section sizes and the smallest Gram eigenvalue observed at each size.
    boundary_min : float or None
        Smallest eigenvalue of the symbol on the boundary grid, when computed.
    """

    def __init__(self, message, ladder=None, boundary_min=None):
        super().__init__(message)
        self.ladder = list(ladder or [])
        self.boundary_min = boundary_min


class NoConvergenceError(BezoutError):
    """Spectral factorization did not reach the requested residual."""


class SingularError(BezoutError, ArithmeticError):
    """A matrix that has to be inverted is numerically singular."""


class RankError(BezoutError):
    """The kernel projector has the wrong numerical rank."""

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class NotASolutionError(BezoutError, ValueError):
    """A candidate ``X`` does not satisfy ``G X = I`` on the boundary grid."""


class UnknownExampleError(BezoutError, KeyError):
    """Requested built-in example does not exist."""
