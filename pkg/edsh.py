#!/usr/bin/env python3
"""
edsh.py

Batch command-line surface of the cross-modal hashing toolkit: synthesize or
convert data, train a model, encode features into binary codes, rank a
database by Hamming distance and score the rankings.

Usage:
    bash:
    export PYTHONPATH=./:$PYTHONPATH
    python edsh.py synth --n 2000 --classes 10 --out ds/
    python edsh.py train --dataset ds/ --out model/ --bits 16
    python edsh.py encode --model model/ --features ds/x1.edshmat --modality 1 --out img.edshbin
    python edsh.py retrieve --queries img.edshbin --database txt.edshbin --top-m all --out rankings.json
    python edsh.py eval --rankings rankings.json --query-labels ds/ --db-labels ds/ --out metrics/

    Run `python edsh.py <command> --help` for the flags of each command.

Environment Variables:
    - LOG_LEVEL: console log level (default WARNING).
    - EDSH_LOG_FILE: log file path (default edsh.log).
    - EDSH_THREADS: default worker count for `retrieve` and `experiment`.
    - EDSH_CONFIG_DIR: directory with hyperparams.json / hyperparams.custom.json.

Exit codes:
    0 success, 1 usage, 2 runtime or numerical failure, 3 file format or I/O.
"""

import logging
import logging.config
import sys

from cli import RunConfig, build_parser, get_command
from common import EXIT_FORMAT, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, EdshError, Settings


def build_logging_config(settings):
    return {
        'version': 1,
        'disable_existing_loggers': False,  # Allow existing loggers to propagate
        'formatters': {
            'standard': {
                'format': '%(asctime)s - %(levelname)s - %(name)s - %(message)s',
            },
        },
        'handlers': {
            'file_handler': {
                'class': 'logging.FileHandler',
                'filename': settings.log_file,
                'mode': 'a',
                'formatter': 'standard',
                'level': 'INFO',
            },
            'console_handler': {
                'class': 'logging.StreamHandler',
                'stream': sys.stderr,
                'formatter': 'standard',
                'level': settings.log_level,
            },
        },
        'root': {
            'handlers': ['file_handler', 'console_handler'],
            'level': 'DEBUG',
        },
    }


def main(argv=None):
    """
    Run one command and return its exit code. Errors are reported on stderr
    and in the log file; no traceback reaches the caller.
    """
    try:
        settings = Settings()
        logging.config.dictConfig(build_logging_config(settings))
    except (ValueError, OSError) as e:
        print(f"edsh: invalid environment configuration: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        args = build_parser().parse_args(argv)
        config = RunConfig.from_namespace(args, default_threads=settings.threads)
        logging.info(f"[edsh] Running {config.command} with {config.to_dict()}")
        get_command(config.command)(config, settings)
        return EXIT_OK
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_OK
    except EdshError as e:
        logging.error(f"[edsh] {type(e).__name__}: {e}")
        print(f"edsh: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logging.error(f"[edsh] I/O error: {e}")
        print(f"edsh: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except Exception as e:
        logging.exception(f"[edsh] Unexpected error: {e}")
        print(f"edsh: unexpected error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == '__main__':
    sys.exit(main())
