import json
import logging
import os
from dataclasses import dataclass, asdict, fields, replace

from common.errors import ArgumentError, UsageError
from kernels import SVD_METHODS

_WEIGHTS = ('lambda1', 'lambda2', 'gamma', 'alpha', 'beta1', 'beta2', 'mu')


@dataclass(frozen=True)
class Hyperparams:
    """
    Weights and solver options of the training objective.

    lambda1/lambda2 weight the two reconstruction terms, gamma the label term,
    alpha the code/rotation alignment, beta1/beta2 the hash-function terms and
    mu the Frobenius regularizer. Training stops after `miter` iterations or
    once the relative objective decrease drops below `rel_tol`.
    """
    lambda1: float = 1.0
    lambda2: float = 1.0
    gamma: float = 10.0
    alpha: float = 2.0
    beta1: float = 10.0
    beta2: float = 10.0
    mu: float = 5.0
    k: int = 16
    miter: int = 20
    seed: int = 0
    rel_tol: float = 1e-5
    svd_method: str = 'lapack'
    monotone_b_step: bool = True

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in _WEIGHTS + ('rel_tol',):
                ok = isinstance(value, (int, float)) and not isinstance(value, bool)
            elif f.name in ('k', 'miter', 'seed'):
                ok = isinstance(value, int) and not isinstance(value, bool)
            elif f.name == 'monotone_b_step':
                ok = isinstance(value, bool)
            else:
                ok = isinstance(value, str)
            if not ok:
                raise ArgumentError(f"{f.name} has the wrong type: {value!r} ({type(value).__name__})")
        for name in _WEIGHTS:
            if not getattr(self, name) > 0:
                raise ArgumentError(f"{name} must be positive, got {getattr(self, name)}")
        if self.k < 1:
            raise ArgumentError(f"code length must be at least 1, got {self.k}")
        if self.miter < 1:
            raise ArgumentError(f"miter must be at least 1, got {self.miter}")
        if not self.rel_tol >= 0:
            raise ArgumentError(f"rel_tol must be non-negative, got {self.rel_tol}")
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.svd_method not in SVD_METHODS:
            raise ArgumentError(f"svd_method must be one of {SVD_METHODS}, got {self.svd_method!r}")

    def lam(self, modality):
        return self.lambda1 if modality == 1 else self.lambda2

    def beta(self, modality):
        return self.beta1 if modality == 1 else self.beta2

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, values):
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise UsageError(f"unknown hyperparameter keys: {', '.join(sorted(unknown))}")
        return cls(**values)

    def with_overrides(self, overrides):
        """Return a copy with the non-None entries of `overrides` applied."""
        overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise UsageError(f"unknown hyperparameter keys: {', '.join(sorted(unknown))}")
        return replace(self, **overrides)


def load_hyperparams(config_dir, hyper_file=None, overrides=None):
    """
    Resolve hyperparameters from, in increasing priority:

    1. `hyperparams.custom.json` in `config_dir` if present, else `hyperparams.json`,
       else the dataclass defaults.
    2. the JSON file `hyper_file`, if given.
    3. `overrides` (typically CLI flags; None values are ignored).

    Unknown keys at any level raise a UsageError.
    """
    custom_file_path = os.path.join(config_dir, "hyperparams.custom.json")
    default_file_path = os.path.join(config_dir, "hyperparams.json")
    if os.path.exists(custom_file_path):
        selected_file = custom_file_path
        logging.info(f"[hyperparams] Using custom file path: {custom_file_path}")
    elif os.path.exists(default_file_path):
        selected_file = default_file_path
        logging.info(f"[hyperparams] Using default file path: {default_file_path}")
    else:
        selected_file = None
        logging.warning(f"[hyperparams] No hyperparameter file in {config_dir}, using built-in defaults.")

    hyper = Hyperparams()
    for path in (selected_file, hyper_file):
        if path is None:
            continue
        with open(path, "r") as f:
            try:
                values = json.load(f)
            except json.JSONDecodeError as e:
                raise UsageError(f"hyperparameter file {path} is not valid JSON: {e}")
        if not isinstance(values, dict):
            raise UsageError(f"hyperparameter file {path} must hold a JSON object")
        hyper = hyper.with_overrides(values)
    return hyper.with_overrides(overrides)
