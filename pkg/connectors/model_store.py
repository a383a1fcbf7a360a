import json
import logging
from pathlib import Path

import numpy as np

from common.errors import EdshError, FormatError
from dataset import CenteringStats
from training import EdshModel, Hyperparams
from .matrix_file import MATRIX_SUFFIX, load_matrix, save_matrix

MODEL_FORMAT = "edsh-model-1"
MODEL_BLOCKS = ("u1", "u2", "p", "v", "r", "w1", "w2", "b")
META_FILE = "meta.json"


class ModelStore:
    """
    A trained model on disk: one EDSHMAT1 file per block plus meta.json holding
    the hyperparameters, centering means, code length and provenance.
    """

    def __init__(self, directory):
        self.directory = Path(directory)

    def block_path(self, name):
        return self.directory / f"{name}{MATRIX_SUFFIX}"

    @property
    def meta_path(self):
        return self.directory / META_FILE

    def save(self, model, provenance=""):
        # 1. Matrices
        self.directory.mkdir(parents=True, exist_ok=True)
        for name in MODEL_BLOCKS:
            save_matrix(self.block_path(name), getattr(model, name))

        # 2. Metadata
        meta = {
            "format": MODEL_FORMAT,
            "k": model.k,
            "d1": model.d1,
            "d2": model.d2,
            "hyperparams": model.hyper.to_dict(),
            "centering": {
                "mean1": model.centering.mean1.tolist(),
                "mean2": model.centering.mean2.tolist(),
            },
            "provenance": provenance,
        }
        self.meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logging.info(f"[model_store] Saved k={model.k} model to {self.directory}")

    def load(self):
        """
        Read the model back.

        Raises:
            FormatError: the directory, a block file or meta.json is missing,
                unreadable or inconsistent with the other files.
        """
        # 1. Metadata
        if not self.meta_path.is_file():
            self._fail(f"model directory {self.directory} has no {META_FILE}")
        try:
            meta = json.loads(self.meta_path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            self._fail(f"{self.meta_path} is not valid JSON: {e}")
        if not isinstance(meta, dict) or meta.get("format") != MODEL_FORMAT:
            self._fail(f"{self.meta_path} is not an {MODEL_FORMAT} metadata file")

        # 2. Matrices
        blocks = {}
        for name in MODEL_BLOCKS:
            path = self.block_path(name)
            if not path.is_file():
                self._fail(f"model directory {self.directory} has no {path.name}")
            blocks[name] = load_matrix(path)

        # 3. Assemble
        try:
            hyper = Hyperparams.from_dict(meta["hyperparams"])
            centering = CenteringStats(
                np.asarray(meta["centering"]["mean1"], dtype=np.float64),
                np.asarray(meta["centering"]["mean2"], dtype=np.float64),
            )
            model = EdshModel(centering=centering, hyper=hyper, **blocks)
        except (KeyError, TypeError, ValueError, EdshError) as e:
            self._fail(f"{self.directory} does not hold a consistent model: {e}")
        if model.k != meta.get("k"):
            self._fail(f"{self.meta_path} declares k={meta.get('k')} but the blocks have k={model.k}")
        logging.info(f"[model_store] Loaded k={model.k} model from {self.directory}")
        return model

    def _fail(self, message):
        logging.error(f"[model_store] {message}")
        raise FormatError(message, path=str(self.directory))


def save_model(directory, model, provenance=""):
    ModelStore(directory).save(model, provenance)


def load_model(directory):
    return ModelStore(directory).load()
