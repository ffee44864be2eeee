"""Exception hierarchy shared by the kernels, the learners and the CLI."""


class GraphKernelError(Exception):
    """Base class for all errors raised by graphkern."""


class DataError(GraphKernelError):
    """Invalid or malformed input data (maps to CLI exit code 2)."""


class NumericError(GraphKernelError):
    """A numerical precondition failed (maps to CLI exit code 3)."""


class DisconnectedGraph(DataError):
    pass


class DegreeOverflow(DataError):
    pass


class FeatureExplosion(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class MissingFile(DataError):
    pass


class MalformedLine(DataError):
    def __init__(self, file, line_no, message="malformed line"):
        self.file = str(file)
        self.line_no = line_no
        super().__init__(f"{self.file}:{line_no}: {message}")


class IndexOutOfRange(DataError):
    pass


class FoldTooSmall(DataError):
    pass


class NoSupportVectors(DataError):
    pass


class GammaTooLarge(NumericError):
    pass


class NonConvergence(NumericError):
    pass


class IoFailure(DataError):
    pass


class DegenerateRange(UserWarning):
    """Emitted when a Gram matrix has zero range and cannot be min-max scaled."""
