"""Exception hierarchy shared by all qcohom modules."""


class QCohomError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(QCohomError):
    """Operands do not fit together (variable lists differ, zero denominator, ...)."""


class ConfigurationError(QCohomError):
    """A user-supplied parameter is out of range."""


class NotRegularError(QCohomError):
    """The moment value lies on a wall, so the quotient is not an orbifold."""


class NonGenericError(QCohomError):
    """The polarization vector is orthogonal to some isotropy weight."""


class DegenerateStageError(QCohomError):
    """A residue stage received no weights or a weight truncated to zero."""


class DimensionError(QCohomError):
    """A class has the wrong degree for the quotient it is paired against."""


class NonSymmetricError(QCohomError):
    """A polynomial expected to be symmetric is not."""

    def __init__(self, message, transposition=None):
        super().__init__(message)
        self.transposition = transposition


class InfiniteQuotientError(QCohomError):
    """The quotient ring is not finite-dimensional."""
