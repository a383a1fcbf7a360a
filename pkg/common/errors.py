import numpy as np

# Exit codes shared by every command of the CLI.
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_FORMAT = 3


class EdshError(Exception):
    """Base class for every error raised by the toolkit."""
    exit_code = EXIT_RUNTIME


class UsageError(EdshError):
    exit_code = EXIT_USAGE


class ArgumentError(UsageError, ValueError):
    """An argument is outside the range an operation accepts."""


class ShapeError(EdshError, ValueError):
    """Matrix or code dimensions do not line up."""


class NumericalError(EdshError, ArithmeticError):
    """Non-finite values or a failed factorization."""


class SingularMatrixError(NumericalError, np.linalg.LinAlgError):
    def __init__(self, message, pivot):
        super().__init__(message)
        self.pivot = pivot


class TrainingError(NumericalError):
    def __init__(self, message, iteration):
        super().__init__(message)
        self.iteration = iteration


class GenerationError(EdshError, RuntimeError):
    """Synthetic data could not be generated for the requested shape."""


class EncodingError(EdshError, ValueError):
    def __init__(self, message, row, col):
        super().__init__(message)
        self.row = row
        self.col = col


class FormatError(EdshError, ValueError):
    exit_code = EXIT_FORMAT

    def __init__(self, message, offset=None, path=None):
        super().__init__(message)
        self.offset = offset
        self.path = path


class DatasetError(FormatError):
    """A dataset violates its structural invariants."""
