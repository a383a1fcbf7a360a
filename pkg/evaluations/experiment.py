"""
Cross-modal retrieval experiment at desk scale: synthesize, split, train once
per code length, then score both retrieval directions against the training set
used as database.
"""

import json
import logging
from dataclasses import replace
from pathlib import Path

import pandas as pd

from common.errors import ArgumentError
from dataset import split, synth
from tools import encode, rank_all
from training import Trainer
from training.constants import IMAGE_MODALITY, TEXT_MODALITY
from .report import DEFAULT_KS, DEFAULT_MAP_M, evaluate_rankings, write_metrics

DEFAULT_BIT_LENGTHS = (8, 16, 24, 32)

# task name -> (query modality, database modality)
TASKS = {
    "image_to_text": (IMAGE_MODALITY, TEXT_MODALITY),
    "text_to_image": (TEXT_MODALITY, IMAGE_MODALITY),
}


def run_task(model, query, database, query_modality, db_modality, m=DEFAULT_MAP_M, ks=DEFAULT_KS,
             ap_denominator='min', threads=1):
    query_codes = encode(model, query.features(query_modality), query_modality)
    db_codes = encode(model, database.features(db_modality), db_modality)
    rankings = rank_all(query_codes, db_codes, db_codes.n, threads=threads)
    return evaluate_rankings(rankings, query.labels, database.labels, m, ks, ap_denominator)


def run_experiment(spec, hyper, out_dir, bit_lengths=DEFAULT_BIT_LENGTHS, query_fraction=0.25,
                   m=DEFAULT_MAP_M, ks=DEFAULT_KS, ap_denominator='min', threads=1):
    """
    Write, under `out_dir`, one metrics directory per (code length, task) plus
    map_table.json and map_table.csv with the mAP of every combination.

    Returns:
        pandas.DataFrame: columns bits, image_to_text, text_to_image.
    """
    bit_lengths = [int(bits) for bits in bit_lengths]
    if not bit_lengths or any(bits < 1 for bits in bit_lengths):
        raise ArgumentError(f"bit lengths must be positive, got {bit_lengths}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    train_set, query_set = split(synth(spec), query_fraction, spec.seed)
    rows = []
    for bits in bit_lengths:
        model, train_report = Trainer(replace(hyper, k=bits)).fit(train_set)
        row = {"bits": bits}
        for task, (query_modality, db_modality) in TASKS.items():
            report = run_task(model, query_set, train_set, query_modality, db_modality, m, ks, ap_denominator, threads)
            write_metrics(out_dir / f"bits_{bits}" / task, report)
            row[task] = report.map_at_m
        logging.info(
            f"[experiment] k={bits}: image->text mAP@{m} {row['image_to_text']:.4f}, "
            f"text->image mAP@{m} {row['text_to_image']:.4f} after {train_report.iterations_run} iterations"
        )
        rows.append(row)

    table = pd.DataFrame(rows, columns=["bits", *TASKS])
    table.to_csv(out_dir / "map_table.csv", index=False)
    (out_dir / "map_table.json").write_text(
        json.dumps({"m_cutoff": m, "rows": table.to_dict(orient="records")}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return table
