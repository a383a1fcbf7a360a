# cli/__init__.py
from .parser import build_parser, EdshArgumentParser, COMMANDS as COMMAND_NAMES
from .run_config import RunConfig
from .commands import get_command, COMMANDS
