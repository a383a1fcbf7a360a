"""Clustered two-modality datasets for desk-scale verification."""

import logging
from dataclasses import dataclass

import numpy as np

from common.errors import ArgumentError, GenerationError
from .dataset import Dataset

MAX_CENTER_ATTEMPTS = 1000
MAX_CENTER_DOT = 0.5


@dataclass(frozen=True)
class SynthSpec:
    n: int
    c: int
    d1: int
    d2: int
    noise_sigma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.c < 2 or self.n < self.c:
            raise ArgumentError(f"need n >= c >= 2, got n={self.n}, c={self.c}")
        if self.d1 < 1 or self.d2 < 1:
            raise ArgumentError(f"feature dimensions must be positive, got d1={self.d1}, d2={self.d2}")
        if self.noise_sigma < 0:
            raise ArgumentError(f"noise sigma must be non-negative, got {self.noise_sigma}")
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


def class_centers(rng, c, d):
    """
    Draw `c` unit-norm centers in R^d whose pairwise dot products are at most 0.5.

    Returns:
        np.ndarray: d x c matrix, one center per column.

    Raises:
        GenerationError: if a center is rejected more than 1000 times in a row.
    """
    centers = np.empty((d, c))
    for j in range(c):
        for _ in range(MAX_CENTER_ATTEMPTS):
            candidate = rng.standard_normal(d)
            norm = np.linalg.norm(candidate)
            if norm == 0.0:
                continue
            candidate /= norm
            if j == 0 or (centers[:, :j].T @ candidate).max() <= MAX_CENTER_DOT:
                centers[:, j] = candidate
                break
        else:
            logging.error(f"[synthetic] could not place center {j} of {c} in {d} dimensions")
            raise GenerationError(
                f"no well-separated center {j} found in {MAX_CENTER_ATTEMPTS} attempts (d={d}, c={c})"
            )
    return centers


def synth(spec):
    """
    Generate a one-hot labelled dataset: every sample is its class center plus
    Gaussian noise with standard deviation `spec.noise_sigma`, in both modalities.
    Deterministic given `spec.seed`.
    """
    rng = np.random.default_rng(spec.seed)
    centers1 = class_centers(rng, spec.c, spec.d1)
    centers2 = class_centers(rng, spec.c, spec.d2)
    assignment = rng.integers(0, spec.c, size=spec.n)

    x1 = centers1[:, assignment] + spec.noise_sigma * rng.standard_normal((spec.d1, spec.n))
    x2 = centers2[:, assignment] + spec.noise_sigma * rng.standard_normal((spec.d2, spec.n))
    labels = np.zeros((spec.c, spec.n))
    labels[assignment, np.arange(spec.n)] = 1.0

    logging.info(
        f"[synthetic] generated n={spec.n} c={spec.c} d1={spec.d1} d2={spec.d2} "
        f"sigma={spec.noise_sigma} seed={spec.seed}"
    )
    return Dataset(x1, x2, labels).validate()
