"""Exception types raised by pathgroup."""


class PathGroupError(Exception):
    """Base class for all pathgroup errors."""


class DimensionMismatch(PathGroupError, ValueError):
    """Two points (or a point and a vector) live in groups of different n."""


class InvalidParams(PathGroupError, ValueError):
    """Geodesic parameters violate their normalization constraints."""


class NonHorizontal(PathGroupError, ValueError):
    """A tangent vector is not in the distribution."""


class NotUnitLevel(PathGroupError, ValueError):
    """A covelocity is not on the level set H = 1/2."""


class NotSpecialOrthogonal(PathGroupError, ValueError):
    """A matrix is not in SO(n)."""


class NotInCutLocus(PathGroupError, ValueError):
    """The point does not belong to the cut locus of the identity."""


class RootNotBracketed(PathGroupError, RuntimeError):
    """A sign change expected by construction was not found."""


class ConvergenceFailure(PathGroupError, RuntimeError):
    """An iterative solver exhausted its budget.

    ``diagnostics`` carries whatever state is useful for a bug report.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
