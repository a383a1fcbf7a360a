import logging

import numpy as np
import pandas as pd

from common.errors import FormatError, NumericalError
from kernels import as_dense


def read_csv_matrix(path, transpose=True):
    """
    Read a headerless numeric CSV into a float64 matrix.

    CSV files usually hold one sample per row, while the toolkit stores one
    sample per column, so the table is transposed unless `transpose` is False.
    """
    try:
        frame = pd.read_csv(path, header=None, dtype=np.float64)
    except (ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        logging.error(f"[csv_import] Could not parse {path}: {e}")
        raise FormatError(f"{path}: not a numeric CSV table: {e}", path=str(path)) from e

    matrix = frame.to_numpy(dtype=np.float64)
    if transpose:
        matrix = matrix.T
    try:
        matrix = as_dense(np.ascontiguousarray(matrix), "csv")
    except NumericalError as e:
        raise FormatError(f"{path}: {e}", path=str(path)) from e
    logging.info(f"[csv_import] Read {frame.shape[0]}x{frame.shape[1]} table from {path}")
    return matrix
