import argparse

from common.errors import UsageError
from kernels import SVD_METHODS

COMMANDS = ("synth", "split", "convert", "train", "encode", "retrieve", "eval", "bench", "experiment")

# argparse dest -> Hyperparams field
HYPER_FLAGS = {
    "bits": "k",
    "miter": "miter",
    "lambda1": "lambda1",
    "lambda2": "lambda2",
    "gamma": "gamma",
    "alpha": "alpha",
    "beta1": "beta1",
    "beta2": "beta2",
    "mu": "mu",
    "rel_tol": "rel_tol",
    "svd": "svd_method",
    "monotone_b_step": "monotone_b_step",
}


class EdshArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting, so the entry point owns the exit code."""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def int_list(text):
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def top_m_value(text):
    """A positive integer, or 'all' (returned as None) for the whole database."""
    if text == "all":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'all', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"top-m must be at least 1, got {value}")
    return value


def modality_value(text):
    if text not in ("1", "2"):
        raise argparse.ArgumentTypeError(f"modality must be 1 or 2, got {text!r}")
    return int(text)


def _add_synth_flags(parser, n_required=True):
    if n_required:
        parser.add_argument("--n", type=int, required=True, help="Number of samples.")
    parser.add_argument("--classes", type=int, required=True, help="Number of classes.")
    parser.add_argument("--d1", type=int, default=64, help="Image feature dimension.")
    parser.add_argument("--d2", type=int, default=32, help="Text feature dimension.")
    parser.add_argument("--noise", type=float, default=0.1, help="Gaussian noise standard deviation.")
    parser.add_argument("--seed", type=int, default=0, help="Random seed.")


def _add_hyper_flags(parser):
    group = parser.add_argument_group("hyperparameters")
    group.add_argument("--bits", type=int, help="Code length k.")
    group.add_argument("--miter", type=int, help="Maximum number of iterations.")
    for name in ("lambda1", "lambda2", "gamma", "alpha", "beta1", "beta2", "mu"):
        group.add_argument(f"--{name}", type=float)
    group.add_argument("--rel-tol", type=float, help="Stop once the relative objective decrease is below this.")
    group.add_argument("--svd", choices=SVD_METHODS, help="SVD backend of the rotation step.")
    group.add_argument("--no-monotone-guard", dest="monotone_b_step", action="store_const", const=False,
                       help="Always accept the sign update of the codes.")
    group.add_argument("--hyper-file", help="JSON file of hyperparameter overrides.")


def _add_eval_flags(parser):
    parser.add_argument("--map-m", type=int, default=100, help="Cutoff M of mAP@M.")
    parser.add_argument("--ks", type=int_list, help="Top-K cutoffs, comma-separated and ascending.")
    parser.add_argument("--ap-denominator", choices=("min", "all"), default="min",
                        help="L = min(relevant, M) or all relevant items.")


def build_parser():
    parser = EdshArgumentParser(prog="edsh", description="Cross-modal discrete supervised hashing toolkit.")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")

    synth = subparsers.add_parser("synth", help="Generate a clustered two-modality dataset.")
    _add_synth_flags(synth)
    synth.add_argument("--out", required=True, help="Output dataset directory.")

    split = subparsers.add_parser("split", help="Split a dataset into training and query parts.")
    split.add_argument("--dataset", required=True)
    split.add_argument("--query-fraction", type=float, default=0.25)
    split.add_argument("--seed", type=int, default=0)
    split.add_argument("--train-out", required=True)
    split.add_argument("--query-out", required=True)

    convert = subparsers.add_parser("convert", help="Convert a CSV table into an EDSHMAT1 matrix file.")
    convert.add_argument("--csv", required=True)
    convert.add_argument("--out", required=True)
    convert.add_argument("--no-transpose", dest="transpose", action="store_false",
                         help="Keep rows as matrix rows instead of one sample per row.")

    train = subparsers.add_parser("train", help="Train a model.")
    train.add_argument("--dataset", required=True)
    train.add_argument("--out", required=True, help="Output model directory.")
    train.add_argument("--seed", type=int, help="Initialization seed.")
    _add_hyper_flags(train)

    encode = subparsers.add_parser("encode", help="Hash a feature matrix with a trained model.")
    encode.add_argument("--model", required=True)
    encode.add_argument("--features", required=True)
    encode.add_argument("--modality", type=modality_value, required=True)
    encode.add_argument("--out", required=True)
    encode.add_argument("--no-rotation", dest="use_rotation", action="store_false",
                        help="Hash with sgn(W x) instead of sgn(R W x).")

    retrieve = subparsers.add_parser("retrieve", help="Rank database codes for every query code.")
    retrieve.add_argument("--queries", required=True)
    retrieve.add_argument("--database", required=True)
    retrieve.add_argument("--top-m", type=top_m_value, default=None, help="Neighbors per query, or 'all'.")
    retrieve.add_argument("--threads", type=int, help="Worker threads for ranking.")
    retrieve.add_argument("--out", required=True)

    evaluate = subparsers.add_parser("eval", help="Score rankings against labels.")
    evaluate.add_argument("--rankings", required=True)
    evaluate.add_argument("--query-labels", required=True)
    evaluate.add_argument("--db-labels", required=True)
    evaluate.add_argument("--out", required=True, help="Output directory for metrics.json, pr.csv, topk.csv.")
    _add_eval_flags(evaluate)

    bench = subparsers.add_parser("bench", help="Time training at increasing dataset sizes.")
    bench.add_argument("--sizes", type=int_list, required=True)
    bench.add_argument("--repeats", type=int, default=1)
    bench.add_argument("--out", required=True, help="Output timing JSON file.")
    _add_synth_flags(bench, n_required=False)
    _add_hyper_flags(bench)

    experiment = subparsers.add_parser("experiment", help="Train per code length and score both retrieval tasks.")
    experiment.add_argument("--n", type=int, default=2000)
    _add_synth_flags(experiment, n_required=False)
    experiment.add_argument("--bit-lengths", type=int_list, default=[8, 16, 24, 32])
    experiment.add_argument("--query-fraction", type=float, default=0.25)
    experiment.add_argument("--threads", type=int)
    experiment.add_argument("--out", required=True, help="Output directory.")
    _add_eval_flags(experiment)
    _add_hyper_flags(experiment)

    return parser
