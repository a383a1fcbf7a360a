# common/__init__.py
from .errors import (
    EdshError,
    UsageError,
    ArgumentError,
    ShapeError,
    NumericalError,
    SingularMatrixError,
    TrainingError,
    GenerationError,
    EncodingError,
    FormatError,
    DatasetError,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_RUNTIME,
    EXIT_FORMAT,
)
from .settings import Settings
