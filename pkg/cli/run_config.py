import logging
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from common.errors import ArgumentError, UsageError
from .parser import HYPER_FLAGS

# command -> namespace attributes naming files or directories that must already exist
INPUT_PATHS = {
    "synth": (),
    "split": ("dataset",),
    "convert": ("csv",),
    "train": ("dataset", "hyper_file"),
    "encode": ("model", "features"),
    "retrieve": ("queries", "database"),
    "eval": ("rankings", "query_labels", "db_labels"),
    "bench": ("hyper_file",),
    "experiment": ("hyper_file",),
}

# command -> namespace attributes naming outputs
OUTPUT_PATHS = {
    "synth": ("out",),
    "split": ("train_out", "query_out"),
    "convert": ("out",),
    "train": ("out",),
    "encode": ("out",),
    "retrieve": ("out",),
    "eval": ("out",),
    "bench": ("out",),
    "experiment": ("out",),
}

OPTION_NAMES = (
    "n", "classes", "d1", "d2", "noise", "seed", "query_fraction", "transpose", "modality",
    "use_rotation", "top_m", "threads", "map_m", "ks", "ap_denominator", "sizes", "repeats", "bit_lengths",
)


@dataclass
class RunConfig:
    """Everything one CLI invocation needs, resolved from the parsed arguments."""
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    hyper_overrides: dict = field(default_factory=dict)
    hyper_file: str = None
    n: int = None
    classes: int = None
    d1: int = 64
    d2: int = 32
    noise: float = 0.1
    seed: int = None
    query_fraction: float = 0.25
    transpose: bool = True
    modality: int = None
    use_rotation: bool = True
    top_m: int = None
    threads: int = 1
    map_m: int = 100
    ks: list = None
    ap_denominator: str = 'min'
    sizes: list = None
    repeats: int = 1
    bit_lengths: list = None

    @classmethod
    def from_namespace(cls, args, default_threads=1):
        values = dict(vars(args))
        command = values.pop("command")
        if command not in INPUT_PATHS:
            raise UsageError(f"unknown command {command!r}")

        inputs = {name: values.pop(name) for name in INPUT_PATHS[command] if name in values}
        outputs = {name: values.pop(name) for name in OUTPUT_PATHS[command]}
        hyper_file = inputs.pop("hyper_file", None)
        hyper_overrides = {HYPER_FLAGS[name]: values.pop(name) for name in list(values) if name in HYPER_FLAGS}
        if command == "train" and values.get("seed") is not None:
            hyper_overrides["seed"] = values["seed"]

        unknown = set(values) - set(OPTION_NAMES)
        if unknown:
            raise UsageError(f"unknown options for {command}: {', '.join(sorted(unknown))}")
        options = {name: value for name, value in values.items() if value is not None}
        options.setdefault("threads", default_threads)

        config = cls(
            command=command, inputs=inputs, outputs=outputs,
            hyper_overrides=hyper_overrides, hyper_file=hyper_file, **options,
        )
        config.validate()
        return config

    def validate(self):
        """Check paths and counts before any work starts."""
        for name, path in self.inputs.items():
            if path is None:
                continue
            if not os.path.exists(path):
                logging.error(f"[run_config] Input {name} does not exist: {path}")
                raise FileNotFoundError(f"{name.replace('_', '-')} path does not exist: {path}")
        if self.hyper_file is not None and not os.path.isfile(self.hyper_file):
            logging.error(f"[run_config] Hyperparameter file does not exist: {self.hyper_file}")
            raise FileNotFoundError(f"hyper-file does not exist: {self.hyper_file}")
        for name, path in self.outputs.items():
            parent = Path(path).resolve().parent
            if not parent.is_dir():
                logging.error(f"[run_config] Parent directory of {name} does not exist: {parent}")
                raise FileNotFoundError(f"parent directory of {name.replace('_', '-')} does not exist: {parent}")
        if self.threads < 1:
            raise ArgumentError(f"threads must be at least 1, got {self.threads}")
        if self.map_m < 1:
            raise ArgumentError(f"map-m must be at least 1, got {self.map_m}")
        if self.repeats < 1:
            raise ArgumentError(f"repeats must be at least 1, got {self.repeats}")

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}
