class PhkitError(ValueError):
    pass


class InvalidInputError(PhkitError):
    pass


class DomainError(PhkitError):
    pass


class NotHermitianError(PhkitError):
    pass


class NotPTSymmetricError(PhkitError):
    pass


class PairNotCompatibleError(PhkitError):
    pass


class ScalarMetricUnsupportedError(PhkitError):
    pass


class CellMismatchError(PhkitError):
    pass


class ProportionalMetricsError(PhkitError):
    pass


class DimensionMismatchError(PhkitError):
    pass


class NoSolutionError(PhkitError):
    pass


class EmptyLevelSetError(PhkitError):
    pass


class GridTooLargeError(PhkitError):
    pass


class VerificationError(PhkitError):
    pass


class MatrixFileError(IOError):
    pass
