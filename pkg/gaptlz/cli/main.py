import logging
import sys
from collections.abc import Sequence

from result import Err, Ok

from ..errors import ConfigError
from .commands import COMMANDS
from .config import RunConfig, parse_config
from .output import render, to_table, write_output

logger = logging.getLogger(__name__)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def run(config: RunConfig) -> int:
    """
    Runs one subcommand and writes its table. Returns 0 when every row was computed and 1
      when at least one row carries an error.
    """
    results, extra = COMMANDS[config.command](config)
    rows = [r.ok_value if isinstance(r, Ok) else r.err_value for r in results]
    table = to_table(config.command, rows, config.digits)
    write_output(render(table, config.format, extra), config.out)
    failed = sum(isinstance(r, Err) for r in results)
    if failed:
        logger.warning(f"{config.command.value}: {failed} of {len(results)} rows failed")
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_config(argv)
    except ConfigError as e:
        print(f"gaptlz: {e}", file=sys.stderr)
        return 2
    logging.basicConfig(
        level=LOG_LEVELS[min(config.verbose, len(LOG_LEVELS) - 1)],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return run(config)
