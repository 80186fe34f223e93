"""Exception types raised by :mod:`entpdf`.

Every validation error carries the measured ``residual`` so callers (and the
CLI) can report by how much an invariant was violated.
"""


class EntanglementError(ValueError):
    """Base class for all errors raised by this package."""

    invariant = "invariant"

    def __init__(self, message=None, residual=None):
        self.residual = residual
        if message is None:
            message = f"{self.invariant} violated"
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)


class NotHermitian(EntanglementError):
    invariant = "hermiticity"


class TraceNotOne(EntanglementError):
    invariant = "unit trace"


class NotPositive(EntanglementError):
    invariant = "positive semidefiniteness"


class NotNormalized(EntanglementError):
    invariant = "unit norm"


class InvalidRank(EntanglementError):
    invariant = "rank in 1..4"


class NotInSubspace(EntanglementError):
    invariant = "membership in subspace"


class NotOrthonormal(EntanglementError):
    invariant = "orthonormal basis"


class DegenerateComplement(EntanglementError):
    invariant = "y^2 + z^2 > 0"


class DegenerateSubspace(EntanglementError):
    invariant = "e_max > 0"


class DivergentDual(EntanglementError):
    invariant = "e_perp < 1"


class ZeroState(EntanglementError):
    invariant = "lambda_1 > 0"


class InfeasibleMarkers(EntanglementError):
    invariant = "marker feasibility"


class MissingAngles(EntanglementError):
    invariant = "angles present"


class InsufficientResolution(EntanglementError):
    invariant = "expected counts per bin >= 100"
