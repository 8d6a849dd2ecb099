from .commands import COMMANDS, attempt
from .config import Command, RunConfig, build_parser, parse_config
from .main import main, run
from .output import format_value, render, to_table

__all__ = [
    "COMMANDS",
    "Command",
    "RunConfig",
    "attempt",
    "build_parser",
    "format_value",
    "main",
    "parse_config",
    "render",
    "run",
    "to_table",
]
