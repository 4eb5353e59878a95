"""
Exception hierarchy.

Every error raised deliberately by drisoparam derives from DRIsoparamError so
callers (the CLI in particular) can map failures to exit codes.
"""


class DRIsoparamError(Exception):
    """Base exception for drisoparam errors."""
    pass


class DimensionMismatchError(DRIsoparamError):
    """Operands do not belong to the algebra they are used with."""
    pass


class CliffordRelationError(DRIsoparamError):
    """Generators violate G_i^2 = -id or the anticommutation relations."""
    pass


class SubspaceError(DRIsoparamError):
    """Invalid subspace data (basis, membership, orthogonality of summands)."""
    pass


class AngleDegeneracyError(DRIsoparamError):
    """A quantity is undefined because a Kähler angle is 0 or pi/2."""
    pass


class FrameError(DRIsoparamError):
    """The adapted frame could not be completed to an orthonormal basis."""
    pass


class InfeasibleConstructionError(DRIsoparamError):
    """Construction parameters violate a feasibility inequality."""
    pass


class ShapeOperatorError(DRIsoparamError):
    """Shape operator assembly failed a consistency check."""
    pass


class ConfigError(DRIsoparamError):
    """Run configuration is missing, malformed or inconsistent."""
    pass


class VerificationError(DRIsoparamError):
    """A named invariant of the verification battery failed."""

    def __init__(self, check: str, message: str):
        """
        Initialize verification error.

        Args:
            check: Name of the failing check
            message: Human-readable detail
        """
        super().__init__(f"{check}: {message}")
        self.check = check
