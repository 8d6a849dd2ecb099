import json
from pathlib import Path
from typing import Any

import polars as pl
from mpmath import mp, mpc, mpf

from ..lib.types import OutputFormat
from .config import Command

COLUMNS: dict[Command, tuple[str, ...]] = {
    Command.LOGDET: ("theta0", "n", "s", "ln_det", "precision_bits", "validated", "error"),
    Command.ASYM: ("theta0", "n", "s", "regime", "expansion", "log_det", "residual", "error"),
    Command.VERIFY_THEOREM: (
        "theta0",
        "n",
        "s",
        "ln_det_s",
        "ln_det_0",
        "delta",
        "envelope",
        "ratio",
        "checks",
        "error",
    ),
    Command.EQUILIBRIUM: (
        "theta0",
        "x",
        "regime",
        "theta1",
        "ell",
        "normalization",
        "equality_residual",
        "min_margin",
        "checks",
        "error",
    ),
    Command.PARAMETRIX_CHECK: (
        "theta0",
        "n",
        "x",
        "object",
        "point_re",
        "point_im",
        "offset",
        "residual",
        "checks",
        "error",
    ),
    Command.SINE_KERNEL: ("y", "s", "m", "ln_det", "expansion", "residual", "error"),
    Command.CUE: ("theta0", "n", "k", "p_k", "error"),
}


def format_value(value: Any, digits: int) -> str:
    """
    Fixed text for one table cell: mpmath values at `digits` significant digits, doubles as
      their shortest round-trip repr, `None` as the empty string.
    """
    match value:
        case None:
            return ""
        case bool():
            return "true" if value else "false"
        case str():
            return value
        case int():
            return str(value)
        case float():
            return repr(value)
        case mpc():
            if value.imag == 0:
                return mp.nstr(value.real, digits)
            return mp.nstr(value, digits)
        case mpf():
            return mp.nstr(value, digits)
    if hasattr(value, "value"):
        # Enums
        return str(value.value)
    return str(value)


def to_table(command: Command, rows: list[dict[str, Any]], digits: int) -> pl.DataFrame:
    """Rows as a DataFrame of strings with the fixed columns of `command`."""
    columns = COLUMNS[command]
    data = {c: [format_value(row.get(c), digits) for row in rows] for c in columns}
    return pl.DataFrame(data, schema={c: pl.Utf8 for c in columns})


def render(
    table: pl.DataFrame, fmt: OutputFormat, extra: list[dict[str, Any]] | None = None
) -> str:
    """
    CSV, or JSON records. `extra` replaces the table rows in JSON output when a subcommand
      has a richer JSON form.
    """
    if fmt == OutputFormat.CSV:
        return table.write_csv()
    records = extra if extra is not None else table.to_dicts()
    return json.dumps(records, indent=2, ensure_ascii=False) + "\n"


def write_output(text: str, out: Path | None) -> None:
    if out is None:
        print(text, end="")
        return
    Path(out).write_text(text)
