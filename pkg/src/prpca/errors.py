"""Exception types shared across the package."""


class PrpcaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMatrix(PrpcaError):
    """Input matrix is empty, non-finite, or otherwise unusable."""


class InvalidParameter(PrpcaError):
    """A scalar parameter is outside its documented range."""


class ShapeError(PrpcaError):
    """Operands have incompatible shapes."""


class NumericalFailure(PrpcaError):
    """A numerical routine failed to produce finite output.

    When raised from the solver, ``trace`` carries the objective history
    accumulated up to the failure point.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InvalidProjectorPair(PrpcaError):
    """P or Q is rank deficient or otherwise inadmissible."""


class UnsupportedDimension(PrpcaError):
    """A dimension is incompatible with the requested construction."""


class NotIdentifiable(PrpcaError):
    """The spread product alpha * beta is >= 1, so the split is ambiguous."""


class BoundNotApplicable(PrpcaError):
    """Penalty-level conditions fail, so the recovery bounds do not apply."""


class FormatError(PrpcaError):
    """A file does not conform to the expected binary format."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset
