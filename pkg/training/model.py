from dataclasses import dataclass, field, replace

import numpy as np

from common.errors import ArgumentError, ShapeError
from dataset import CenteringStats
from .hyperparams import Hyperparams


@dataclass(frozen=True)
class EdshModel:
    """
    Trained parameters.

    u1 (d1 x k), u2 (d2 x k): modality factor matrices; p (c x k): label
    projection; v (k x N): shared latent space of the training set; r (k x k):
    orthogonal rotation; b (k x N): +-1 training codes; w1 (k x d1),
    w2 (k x d2): linear hash functions.
    """
    u1: np.ndarray
    u2: np.ndarray
    p: np.ndarray
    v: np.ndarray
    r: np.ndarray
    b: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    centering: CenteringStats
    hyper: Hyperparams

    def __post_init__(self):
        k = self.hyper.k
        n = self.v.shape[1] if self.v.ndim == 2 else -1
        expected = {
            'u1': (self.u1.shape[0], k), 'u2': (self.u2.shape[0], k), 'p': (self.p.shape[0], k),
            'v': (k, n), 'r': (k, k), 'b': (k, n),
            'w1': (k, self.u1.shape[0]), 'w2': (k, self.u2.shape[0]),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ShapeError(f"model block {name} has shape {getattr(self, name).shape}, expected {shape}")
        if self.centering.mean1.shape != (self.d1,) or self.centering.mean2.shape != (self.d2,):
            raise ShapeError("centering statistics do not match the feature dimensions")

    @property
    def k(self):
        return self.hyper.k

    @property
    def d1(self):
        return self.u1.shape[0]

    @property
    def d2(self):
        return self.u2.shape[0]

    def u(self, modality):
        return _pick(self.u1, self.u2, modality)

    def w(self, modality):
        return _pick(self.w1, self.w2, modality)

    def with_block(self, name, value):
        return replace(self, **{name: value})


def _pick(first, second, modality):
    if modality == 1:
        return first
    elif modality == 2:
        return second
    raise ArgumentError(f"modality must be 1 or 2, got {modality}")


@dataclass
class TrainReport:
    objective_trace: list = field(default_factory=list)
    iterations_run: int = 0
    wall_seconds: float = 0.0
    iteration_seconds: list = field(default_factory=list)
    initial_objective: float = float('nan')
    converged: bool = False
    rejected_b_steps: int = 0

    def to_dict(self):
        return {
            "objective_trace": list(self.objective_trace),
            "iterations_run": self.iterations_run,
            "wall_seconds": self.wall_seconds,
            "iteration_seconds": list(self.iteration_seconds),
            "initial_objective": self.initial_objective,
            "converged": self.converged,
            "rejected_b_steps": self.rejected_b_steps,
        }
