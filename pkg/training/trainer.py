import logging
import time
import uuid

import numpy as np

from common.errors import NumericalError, TrainingError
from dataset import CenteringStats, center_dataset
from .constants import UPDATE_ORDER, UPDATE_B, MONOTONE_SLACK, ORTHOGONALITY_TOL
from .model import EdshModel, TrainReport
from .objective import objective, code_step_cost
from .steps import get_update_step, update_u, update_p


def init_state(train, hyper, centering=None):
    """
    Random starting point: B uniform +-1; V, W1, W2 Gaussian with variance 1/k;
    R the orthogonal factor of a Gaussian k x k matrix. U1, U2 and P are then
    fitted to those blocks with their closed-form updates. Deterministic given
    hyper.seed.

    `train` is expected to be centered already.
    """
    k, n = hyper.k, train.n
    if n <= k:
        logging.warning(f"[trainer] N={n} <= k={k}: B B^T is likely rank deficient, relying on the ridge")

    rng = np.random.default_rng(hyper.seed)
    scale = 1.0 / np.sqrt(k)
    b = np.where(rng.random((k, n)) < 0.5, -1.0, 1.0)
    v = rng.normal(0.0, scale, size=(k, n))
    w1 = rng.normal(0.0, scale, size=(k, train.d1))
    w2 = rng.normal(0.0, scale, size=(k, train.d2))
    q, upper = np.linalg.qr(rng.standard_normal((k, k)))
    r = q * np.where(np.diag(upper) < 0, -1.0, 1.0)

    if centering is None:
        centering = CenteringStats(np.zeros(train.d1), np.zeros(train.d2))
    model = EdshModel(
        u1=np.zeros((train.d1, k)), u2=np.zeros((train.d2, k)), p=np.zeros((train.c, k)),
        v=v, r=r, b=b, w1=w1, w2=w2, centering=centering, hyper=hyper,
    )
    model = model.with_block('u1', update_u(model, train, 1))
    model = model.with_block('u2', update_u(model, train, 2))
    return model.with_block('p', update_p(model, train))


class Trainer:
    """
    Runs the alternating optimization: centers the features, initializes the
    blocks, then repeats the eight block updates in a fixed order until
    `miter` iterations or a relative objective decrease below `rel_tol`.
    """

    def __init__(self, hyper, run_id=None):
        self.hyper = hyper
        self.run_id = run_id or str(uuid.uuid4())
        self.short_id = self.run_id[:8]

    def fit(self, ds):
        start_time = time.perf_counter()
        ds.validate()
        train, centering = center_dataset(ds)
        logging.info(
            f"[trainer] {self.short_id} Training on N={train.n} d1={train.d1} d2={train.d2} "
            f"c={train.c} with k={self.hyper.k}."
        )
        model = init_state(train, self.hyper, centering)
        report = TrainReport(initial_objective=objective(model, train))
        logging.info(f"[trainer] {self.short_id} Initial objective {report.initial_objective:.6e}.")

        previous = report.initial_objective
        for iteration in range(1, self.hyper.miter + 1):
            iteration_start = time.perf_counter()
            try:
                model = self._iterate(model, train, report)
            except NumericalError as e:
                logging.error(f"[trainer] {self.short_id} Numerical failure at iteration {iteration}: {e}")
                raise TrainingError(f"numerical failure at iteration {iteration}: {e}", iteration=iteration) from e
            value = objective(model, train)
            report.iteration_seconds.append(time.perf_counter() - iteration_start)

            if not np.isfinite(value):
                logging.error(f"[trainer] {self.short_id} Objective became non-finite at iteration {iteration}.")
                raise TrainingError(f"objective is not finite at iteration {iteration}", iteration=iteration)
            self._check_invariants(model, iteration)
            report.objective_trace.append(value)
            report.iterations_run = iteration

            if value > previous + MONOTONE_SLACK * abs(previous):
                message = f"Objective rose from {previous:.9e} to {value:.9e} at iteration {iteration}."
                if self.hyper.monotone_b_step:
                    logging.error(f"[trainer] {self.short_id} {message}")
                    raise TrainingError(f"objective is not monotone: {message}", iteration=iteration)
                logging.warning(f"[trainer] {self.short_id} {message}")
            decrease = (previous - value) / max(abs(previous), np.finfo(np.float64).tiny)
            logging.info(f"[trainer] {self.short_id} Iteration {iteration}: objective {value:.6e} (relative decrease {decrease:.3e}).")
            # a rise inside the slack counts as no change
            if -MONOTONE_SLACK <= decrease < self.hyper.rel_tol:
                report.converged = True
                break
            previous = value

        report.wall_seconds = time.perf_counter() - start_time
        logging.info(
            f"[trainer] {self.short_id} Finished {report.iterations_run} iterations in {report.wall_seconds:.3f} sec."
        )
        return model, report

    def _iterate(self, model, train, report):
        for name in UPDATE_ORDER:
            block = get_update_step(name)(model, train)
            if name == UPDATE_B and self.hyper.monotone_b_step:
                if code_step_cost(model, train, block) > code_step_cost(model, train, model.b):
                    report.rejected_b_steps += 1
                    logging.debug(f"[trainer] {self.short_id} Kept previous codes, sign update would raise the objective.")
                    continue
            model = model.with_block(name, block)
        return model

    def _check_invariants(self, model, iteration):
        drift = np.linalg.norm(model.r @ model.r.T - np.eye(model.k))
        if drift > ORTHOGONALITY_TOL:
            raise TrainingError(f"rotation lost orthogonality ({drift:.3e}) at iteration {iteration}", iteration=iteration)
        if not np.isin(model.b, (-1.0, 1.0)).all():
            raise TrainingError(f"codes left {{-1, 1}} at iteration {iteration}", iteration=iteration)


def train(ds, hyper):
    """Fit a model on `ds`; returns (EdshModel, TrainReport)."""
    return Trainer(hyper).fit(ds)
