"""Exception hierarchy shared across the package."""


class QcmassError(Exception):
    """Base class for all library errors."""


class InvalidArgument(QcmassError):
    pass


class DimensionMismatch(QcmassError):
    pass


class MarginalViolation(QcmassError):
    pass


class NegativeMass(QcmassError):
    pass


class LipschitzViolation(QcmassError):
    pass


class OutOfDomain(QcmassError):
    pass


class PartitionGap(QcmassError):
    pass


class InvalidBlock(QcmassError):
    pass


class NotQuasiCopula(QcmassError):
    pass


class GridMismatch(QcmassError):
    pass


class EndpointMismatch(QcmassError):
    pass


class ZeroMeasure(QcmassError):
    pass


class MissingTarget(QcmassError):
    pass


class EmptyInput(QcmassError):
    pass


class InvalidTruncation(QcmassError):
    pass
