"""Bit packing of +-1 code matrices into 64-bit words."""

import logging
from dataclasses import dataclass

import numpy as np

from common.errors import EncodingError, ShapeError

WORD_BITS = 64
_SHIFTS = np.arange(WORD_BITS, dtype=np.uint64)


def words_per_code(k):
    return -(-k // WORD_BITS)


@dataclass(frozen=True)
class PackedCodes:
    """
    n binary codes of k bits each.

    `words` has shape (n, ceil(k/64)) and dtype uint64; bit j of code i sits in
    words[i, j // 64] at bit position j % 64. Bits at positions >= k are zero.
    """
    n: int
    k: int
    words: np.ndarray

    def __post_init__(self):
        words = np.ascontiguousarray(self.words, dtype=np.uint64)
        if self.k < 1:
            raise ShapeError(f"codes need at least one bit, got k={self.k}")
        if words.shape != (self.n, words_per_code(self.k)):
            raise ShapeError(f"word array {words.shape} does not match n={self.n}, k={self.k}")
        tail = self.k % WORD_BITS
        if tail and self.n and (words[:, -1] >> np.uint64(tail)).any():
            raise ShapeError("padding bits beyond k must be zero")
        words.setflags(write=False)
        object.__setattr__(self, 'words', words)

    def code(self, i):
        """Single-code view of code i."""
        if not 0 <= i < self.n:
            raise IndexError(f"code index {i} out of range for {self.n} codes")
        return PackedCodes(1, self.k, self.words[i:i + 1])


def pack(b):
    """
    Pack a k x n matrix of +-1 entries (one code per column). Bit j of code i
    is set iff b[j, i] == +1.

    Raises:
        EncodingError: on the first entry that is not exactly +1 or -1.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2:
        raise ShapeError(f"code matrix must be 2-D, got shape {b.shape}")
    invalid = np.argwhere((b != 1.0) & (b != -1.0))
    if invalid.size:
        row, col = (int(v) for v in invalid[0])
        logging.error(f"[packing] entry ({row}, {col}) = {b[row, col]} is not +-1")
        raise EncodingError(f"code entry ({row}, {col}) is {b[row, col]}, expected +1 or -1", row=row, col=col)

    k, n = b.shape
    w = words_per_code(k)
    bits = np.zeros((w * WORD_BITS, n), dtype=np.uint64)
    bits[:k] = b > 0
    bits = bits.reshape(w, WORD_BITS, n) << _SHIFTS[None, :, None]
    words = np.bitwise_or.reduce(bits, axis=1).T
    return PackedCodes(n, k, words)


def unpack(codes):
    """Inverse of pack: a k x n float matrix of +-1."""
    bits = (codes.words[:, :, None] >> _SHIFTS[None, None, :]) & np.uint64(1)
    bits = bits.reshape(codes.n, codes.words.shape[1] * WORD_BITS)[:, :codes.k].T
    return np.where(bits == 1, 1.0, -1.0)
