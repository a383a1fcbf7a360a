import logging
from dataclasses import dataclass

import numpy as np

from common.errors import ArgumentError, DatasetError, ShapeError
from kernels import as_dense


@dataclass(frozen=True)
class Dataset:
    """
    Paired two-modality features with their class labels.

    Columns are samples: x1 is d1 x N, x2 is d2 x N and labels is c x N with
    entries in {0, 1}.
    """
    x1: np.ndarray
    x2: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        x1 = as_dense(self.x1, "x1")
        x2 = as_dense(self.x2, "x2")
        labels = as_dense(self.labels, "labels")
        if not (x1.shape[1] == x2.shape[1] == labels.shape[1]):
            raise ShapeError(
                f"sample counts differ: x1 has {x1.shape[1]}, x2 has {x2.shape[1]}, labels has {labels.shape[1]}"
            )
        if not np.isin(labels, (0.0, 1.0)).all():
            raise DatasetError("label entries must be exactly 0 or 1")
        object.__setattr__(self, 'x1', x1)
        object.__setattr__(self, 'x2', x2)
        object.__setattr__(self, 'labels', labels)

    @property
    def n(self):
        return self.x1.shape[1]

    @property
    def d1(self):
        return self.x1.shape[0]

    @property
    def d2(self):
        return self.x2.shape[0]

    @property
    def c(self):
        return self.labels.shape[0]

    def features(self, modality):
        if modality == 1:
            return self.x1
        elif modality == 2:
            return self.x2
        raise ArgumentError(f"modality must be 1 or 2, got {modality}")

    def columns(self, index):
        index = np.asarray(index, dtype=np.intp)
        return Dataset(self.x1[:, index], self.x2[:, index], self.labels[:, index])

    def validate(self):
        """Check the label invariant every stored dataset must hold: each sample has at least one class."""
        empty = np.flatnonzero(self.labels.sum(axis=0) == 0)
        if empty.size:
            logging.error(f"[dataset] {empty.size} samples carry no class label (first: column {empty[0]})")
            raise DatasetError(f"sample {empty[0]} has no class label")
        return self


@dataclass(frozen=True)
class CenteringStats:
    mean1: np.ndarray
    mean2: np.ndarray

    def mean(self, modality):
        if modality == 1:
            return self.mean1
        elif modality == 2:
            return self.mean2
        raise ArgumentError(f"modality must be 1 or 2, got {modality}")


def center(x):
    """Subtract the row means of `x`; returns (centered, mean)."""
    x = as_dense(x, "x")
    if x.shape[1] < 1:
        raise ShapeError("cannot center a matrix without columns")
    mean = x.mean(axis=1)
    return x - mean[:, None], mean


def apply_center(x, mean):
    x = as_dense(x, "x")
    mean = np.asarray(mean, dtype=np.float64).reshape(-1)
    if mean.shape[0] != x.shape[0]:
        raise ShapeError(f"mean has length {mean.shape[0]}, features have {x.shape[0]} rows")
    return x - mean[:, None]


def center_dataset(ds):
    """Center both modalities of `ds`; returns (centered dataset, CenteringStats)."""
    x1, mean1 = center(ds.x1)
    x2, mean2 = center(ds.x2)
    return Dataset(x1, x2, ds.labels), CenteringStats(mean1, mean2)


def split(ds, query_fraction, seed):
    """
    Randomly partition the samples of `ds` into a training part and a query part.

    The query size is round(N * query_fraction) clamped into [1, N - 1]. Both
    parts keep the original column order.

    Returns:
        tuple: (train, query)
    """
    n = ds.n
    if not 0.0 < query_fraction < 1.0:
        raise ArgumentError(f"query fraction must lie in (0, 1), got {query_fraction}")
    if n < 2:
        raise ArgumentError(f"cannot split a dataset of {n} samples")
    n_query = int(round(n * query_fraction))
    clamped = min(max(n_query, 1), n - 1)
    if clamped != n_query:
        logging.warning(f"[dataset] query size {n_query} clamped to {clamped} for N={n}")

    rng = np.random.default_rng(seed)
    is_query = np.zeros(n, dtype=bool)
    is_query[rng.permutation(n)[:clamped]] = True
    query_index = np.flatnonzero(is_query)
    train_index = np.flatnonzero(~is_query)
    logging.info(f"[dataset] split {n} samples into {train_index.size} train / {query_index.size} query")
    return ds.columns(train_index), ds.columns(query_index)
