import logging
from pathlib import Path

import numpy as np

from common.errors import DatasetError, ShapeError
from dataset import Dataset
from .matrix_file import MATRIX_SUFFIX, load_matrix, save_matrix

DATASET_FILES = ("x1", "x2", "labels")


def dataset_paths(directory):
    directory = Path(directory)
    return {name: directory / f"{name}{MATRIX_SUFFIX}" for name in DATASET_FILES}


def save_dataset(directory, ds):
    """Write `ds` as x1, x2 and labels EDSHMAT1 files inside `directory` (created if needed)."""
    Path(directory).mkdir(parents=True, exist_ok=True)
    paths = dataset_paths(directory)
    for name, path in paths.items():
        save_matrix(path, getattr(ds, name))
    logging.info(f"[dataset_store] Saved N={ds.n} d1={ds.d1} d2={ds.d2} c={ds.c} to {directory}")


def load_dataset(directory, validate=True):
    """
    Read a dataset directory.

    Raises:
        FormatError: a file is missing or corrupt.
        DatasetError: the three matrices do not describe a consistent dataset.
    """
    paths = dataset_paths(directory)
    if not Path(directory).is_dir():
        logging.error(f"[dataset_store] Dataset directory {directory} not found.")
        raise DatasetError(f"dataset directory {directory} does not exist", path=str(directory))
    matrices = {}
    for name, path in paths.items():
        if not path.is_file():
            logging.error(f"[dataset_store] Missing {path}.")
            raise DatasetError(f"dataset directory {directory} has no {path.name}", path=str(path))
        matrices[name] = load_matrix(path)
    try:
        ds = Dataset(**matrices)
    except ShapeError as e:
        raise DatasetError(f"{directory}: {e}", path=str(directory)) from e
    if validate:
        ds.validate()
    logging.info(f"[dataset_store] Loaded N={ds.n} d1={ds.d1} d2={ds.d2} c={ds.c} from {directory}")
    return ds


def load_labels(path):
    """Load a c x N label matrix on its own (a labels file or a dataset directory)."""
    path = Path(path)
    if path.is_dir():
        path = dataset_paths(path)["labels"]
    labels = load_matrix(path)
    if not np.isin(labels, (0.0, 1.0)).all():
        raise DatasetError(f"{path}: label entries must be exactly 0 or 1", path=str(path))
    return labels
