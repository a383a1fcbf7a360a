import logging
import struct
from pathlib import Path

import numpy as np

from common.errors import FormatError
from kernels import as_dense

MATRIX_MAGIC = b"EDSHMAT1"
MATRIX_HEADER = struct.Struct("<8sII")
MATRIX_SUFFIX = ".edshmat"
_FLOAT = np.dtype("<f8")


def save_matrix(path, m):
    """
    Write `m` as an EDSHMAT1 file: 8-byte magic, rows and cols as little-endian
    u32, then rows*cols little-endian float64 values in row-major order.
    """
    m = as_dense(m, "matrix")
    rows, cols = m.shape
    if rows >= 2 ** 32 or cols >= 2 ** 32:
        raise FormatError(f"matrix {rows}x{cols} does not fit an EDSHMAT1 header", path=str(path))
    payload = np.ascontiguousarray(m, dtype=_FLOAT).tobytes()
    Path(path).write_bytes(MATRIX_HEADER.pack(MATRIX_MAGIC, rows, cols) + payload)
    logging.debug(f"[matrix_file] wrote {rows}x{cols} matrix to {path}")


def load_matrix(path):
    data = Path(path).read_bytes()
    return decode_matrix(data, path=str(path))


def decode_matrix(data, path=None):
    """
    Parse EDSHMAT1 bytes into a float64 matrix.

    Raises:
        FormatError: bad magic, short header, truncated or oversized payload,
            or a non-finite value; `offset` is the byte position of the problem.
    """
    if len(data) < MATRIX_HEADER.size:
        _fail(f"header needs {MATRIX_HEADER.size} bytes, file has {len(data)}", len(data), path)
    magic, rows, cols = MATRIX_HEADER.unpack_from(data, 0)
    if magic != MATRIX_MAGIC:
        _fail(f"bad magic {magic!r}, expected {MATRIX_MAGIC!r}", 0, path)

    expected = MATRIX_HEADER.size + rows * cols * _FLOAT.itemsize
    if len(data) < expected:
        present = (len(data) - MATRIX_HEADER.size) // _FLOAT.itemsize
        _fail(f"header declares {rows}x{cols} values but payload holds {present}", len(data), path)
    if len(data) > expected:
        _fail(f"{len(data) - expected} unexpected bytes after the payload", expected, path)

    values = np.frombuffer(data, dtype=_FLOAT, count=rows * cols, offset=MATRIX_HEADER.size)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        _fail(f"non-finite value at element {bad[0]}", MATRIX_HEADER.size + int(bad[0]) * _FLOAT.itemsize, path)
    return values.astype(np.float64).reshape(rows, cols)


def _fail(message, offset, path):
    logging.error(f"[matrix_file] {path or '<bytes>'}: {message} (byte offset {offset})")
    raise FormatError(f"{path or '<bytes>'}: {message} (byte offset {offset})", offset=offset, path=path)
