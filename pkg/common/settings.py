import os
from pathlib import Path

from dotenv import load_dotenv

DEFAULT_CONFIG_DIR = Path(__file__).resolve().parent.parent / "config" / "edsh"


class Settings:
    """
    Process-wide settings read from the environment.

    A `.env` file in the working directory is loaded first, so any of the
    variables below can be kept there instead of being exported.

    Environment Variables:
        - LOG_LEVEL: console log level (default WARNING).
        - EDSH_LOG_FILE: path of the log file (default edsh.log).
        - EDSH_THREADS: default worker count for query ranking (default 1).
        - EDSH_CONFIG_DIR: directory holding hyperparams.json.
    """

    def __init__(self):
        load_dotenv()
        self.log_level = os.getenv('LOG_LEVEL', 'WARNING').upper()
        self.log_file = os.getenv('EDSH_LOG_FILE', 'edsh.log')
        self.threads = int(os.getenv('EDSH_THREADS', 1))
        self.config_dir = Path(os.getenv('EDSH_CONFIG_DIR', str(DEFAULT_CONFIG_DIR)))
