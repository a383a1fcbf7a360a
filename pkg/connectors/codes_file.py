import logging
import struct
from pathlib import Path

import numpy as np

from common.errors import FormatError, ShapeError
from tools.retrieval.packing import PackedCodes, WORD_BITS, words_per_code

CODES_MAGIC = b"EDSHBIN1"
CODES_HEADER = struct.Struct("<8sII")
_WORD = np.dtype("<u8")


def save_codes(path, codes):
    """Write packed codes as EDSHBIN1: magic, n and k as u32, then n*ceil(k/64) u64 words."""
    payload = np.ascontiguousarray(codes.words, dtype=_WORD).tobytes()
    Path(path).write_bytes(CODES_HEADER.pack(CODES_MAGIC, codes.n, codes.k) + payload)
    logging.info(f"[codes_file] wrote {codes.n} codes of {codes.k} bits to {path}")


def load_codes(path):
    data = Path(path).read_bytes()
    return decode_codes(data, path=str(path))


def decode_codes(data, path=None):
    where = path or '<bytes>'
    if len(data) < CODES_HEADER.size:
        _fail(f"{where}: header needs {CODES_HEADER.size} bytes, file has {len(data)}", len(data), path)
    magic, n, k = CODES_HEADER.unpack_from(data, 0)
    if magic != CODES_MAGIC:
        _fail(f"{where}: bad magic {magic!r}, expected {CODES_MAGIC!r}", 0, path)
    if k < 1:
        _fail(f"{where}: code length must be positive, header says {k}", 12, path)

    w = words_per_code(k)
    expected = CODES_HEADER.size + n * w * _WORD.itemsize
    if len(data) < expected:
        _fail(f"{where}: header declares {n} codes of {k} bits, payload is truncated", len(data), path)
    if len(data) > expected:
        _fail(f"{where}: {len(data) - expected} unexpected bytes after the payload", expected, path)

    words = np.frombuffer(data, dtype=_WORD, count=n * w, offset=CODES_HEADER.size).astype(np.uint64)
    words = words.reshape(n, w)
    tail = k % WORD_BITS
    if tail and n:
        dirty = np.flatnonzero(words[:, -1] >> np.uint64(tail))
        if dirty.size:
            offset = CODES_HEADER.size + (int(dirty[0]) * w + w - 1) * _WORD.itemsize
            _fail(f"{where}: code {dirty[0]} has padding bits set beyond k={k}", offset, path)
    try:
        return PackedCodes(n, k, words)
    except ShapeError as e:
        _fail(f"{where}: {e}", CODES_HEADER.size, path)


def _fail(message, offset, path):
    logging.error(f"[codes_file] {message} (byte offset {offset})")
    raise FormatError(f"{message} (byte offset {offset})", offset=offset, path=path)
