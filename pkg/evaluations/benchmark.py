import logging
from dataclasses import replace

import numpy as np
import pandas as pd

from common.errors import ArgumentError
from dataset import SynthSpec, synth
from training import Trainer

BENCH_COLUMNS = ["n", "iterations", "wall_seconds", "seconds_per_iteration", "repeats"]


def run_benchmark(sizes, spec, hyper, repeats=1):
    """
    Train once per dataset size (and per repeat) on freshly synthesized data.

    `spec` is the synthesis template; its `n` is replaced by each size and its
    seed is kept, so every size is generated deterministically. Timings are the
    median over the repeats.

    Returns:
        pandas.DataFrame: one row per size with BENCH_COLUMNS.
    """
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ArgumentError("benchmark needs at least one dataset size")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ArgumentError(f"benchmark sizes must be strictly ascending, got {sizes}")
    if repeats < 1:
        raise ArgumentError(f"repeats must be at least 1, got {repeats}")

    rows = []
    for n in sizes:
        ds = synth(replace(spec, n=n))
        wall, per_iteration, iterations = [], [], []
        for repeat in range(repeats):
            _, report = Trainer(hyper).fit(ds)
            wall.append(report.wall_seconds)
            per_iteration.append(float(np.mean(report.iteration_seconds)))
            iterations.append(report.iterations_run)
        row = {
            "n": n,
            "iterations": int(np.median(iterations)),
            "wall_seconds": float(np.median(wall)),
            "seconds_per_iteration": float(np.median(per_iteration)),
            "repeats": repeats,
        }
        logging.info(
            f"[benchmark] N={n}: {row['iterations']} iterations, {row['wall_seconds']:.3f} sec, "
            f"{row['seconds_per_iteration']:.4f} sec/iteration"
        )
        rows.append(row)
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def scaling_ratios(table):
    """Per-iteration time of each size relative to the previous one."""
    per_iteration = table["seconds_per_iteration"].to_numpy()
    return (per_iteration[1:] / per_iteration[:-1]).tolist()
