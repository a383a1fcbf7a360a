import json
import logging
from pathlib import Path

import pandas as pd

from common.errors import ShapeError
from connectors import (
    load_codes,
    load_dataset,
    load_labels,
    load_matrix,
    load_model,
    load_rankings,
    read_csv_matrix,
    save_codes,
    save_dataset,
    save_matrix,
    save_model,
    save_rankings,
)
from dataset import SynthSpec, split, synth
from evaluations import DEFAULT_BIT_LENGTHS, DEFAULT_KS, evaluate_rankings, run_benchmark, run_experiment, write_metrics
from tools import encode, get_timestamp, rank_all
from training import Trainer, load_hyperparams


def _write_json(path, document):
    Path(path).write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _hyperparams(config, settings, **extra):
    overrides = dict(config.hyper_overrides)
    overrides.update(extra)
    return load_hyperparams(settings.config_dir, config.hyper_file, overrides)


def _synth_spec(config, n=None):
    return SynthSpec(
        n=n if n is not None else config.n, c=config.classes, d1=config.d1, d2=config.d2,
        noise_sigma=config.noise, seed=config.seed or 0,
    )


def cmd_synth(config, settings):
    ds = synth(_synth_spec(config))
    save_dataset(config.outputs["out"], ds)


def cmd_split(config, settings):
    ds = load_dataset(config.inputs["dataset"])
    train_set, query_set = split(ds, config.query_fraction, config.seed or 0)
    save_dataset(config.outputs["train_out"], train_set)
    save_dataset(config.outputs["query_out"], query_set)


def cmd_convert(config, settings):
    matrix = read_csv_matrix(config.inputs["csv"], transpose=config.transpose)
    save_matrix(config.outputs["out"], matrix)


def cmd_train(config, settings):
    """Train on a dataset directory; writes the model directory with train_report.json and convergence.csv."""
    ds = load_dataset(config.inputs["dataset"])
    hyper = _hyperparams(config, settings)
    trainer = Trainer(hyper)
    model, report = trainer.fit(ds)

    out = Path(config.outputs["out"])
    provenance = f"edsh train run {trainer.run_id} on {config.inputs['dataset']} (N={ds.n}) at {get_timestamp()}"
    save_model(out, model, provenance)
    _write_json(out / "train_report.json", report.to_dict())
    pd.DataFrame(
        {"iteration": range(1, len(report.objective_trace) + 1), "objective": report.objective_trace}
    ).to_csv(out / "convergence.csv", index=False)
    print(f"Trained k={model.k} in {report.iterations_run} iterations, final objective {report.objective_trace[-1]:.6e}")


def cmd_encode(config, settings):
    model = load_model(config.inputs["model"])
    features = load_matrix(config.inputs["features"])
    codes = encode(model, features, config.modality, use_rotation=config.use_rotation)
    save_codes(config.outputs["out"], codes)


def cmd_retrieve(config, settings):
    queries = load_codes(config.inputs["queries"])
    db = load_codes(config.inputs["database"])
    if queries.k != db.k:
        raise ShapeError(f"query codes have {queries.k} bits, database codes have {db.k}")
    top_m = db.n if config.top_m is None else config.top_m
    rankings = rank_all(queries, db, max(top_m, 1), threads=config.threads)
    save_rankings(config.outputs["out"], rankings, db.k, top_m, db.n)


def cmd_eval(config, settings):
    rankings, header = load_rankings(config.inputs["rankings"])
    query_labels = load_labels(config.inputs["query_labels"])
    db_labels = load_labels(config.inputs["db_labels"])
    if header.get("db_size") is not None and header["db_size"] != db_labels.shape[1]:
        raise ShapeError(f"rankings cover {header['db_size']} database items, labels have {db_labels.shape[1]}")
    report = evaluate_rankings(
        rankings, query_labels, db_labels, config.map_m, config.ks or DEFAULT_KS, config.ap_denominator
    )
    write_metrics(config.outputs["out"], report)
    print(f"mAP@{report.m_cutoff} = {report.map_at_m:.4f}")


def cmd_bench(config, settings):
    hyper = _hyperparams(config, settings, seed=config.seed)
    table = run_benchmark(config.sizes, _synth_spec(config, n=config.sizes[0]), hyper, config.repeats)
    _write_json(config.outputs["out"], {"hyperparams": hyper.to_dict(), "rows": table.to_dict(orient="records")})
    print(table.to_string(index=False))


def cmd_experiment(config, settings):
    hyper = _hyperparams(config, settings, seed=config.seed)
    table = run_experiment(
        _synth_spec(config), hyper, config.outputs["out"],
        bit_lengths=config.bit_lengths or DEFAULT_BIT_LENGTHS, query_fraction=config.query_fraction,
        m=config.map_m, ks=config.ks or DEFAULT_KS, ap_denominator=config.ap_denominator, threads=config.threads,
    )
    print(table.to_string(index=False))


COMMANDS = {
    "synth": cmd_synth,
    "split": cmd_split,
    "convert": cmd_convert,
    "train": cmd_train,
    "encode": cmd_encode,
    "retrieve": cmd_retrieve,
    "eval": cmd_eval,
    "bench": cmd_bench,
    "experiment": cmd_experiment,
}


def get_command(name):
    """Return the handler of a subcommand."""
    if name in COMMANDS:
        return COMMANDS[name]
    logging.error(f"[cli] Unknown command: {name}")
    raise ValueError(f"Unknown command: {name}")
