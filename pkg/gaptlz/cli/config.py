import argparse
import json
from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Annotated, Any, NoReturn

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..asymptotics.core import DEFAULT_K_MAX
from ..errors import ConfigError, ConfigTypeError, UnknownFlag
from ..lib.expr import ScalarField
from ..lib.types import JumpObject, OutputFormat, Side
from ..lib.util import get, remove_empty_values, split_list
from ..numerics.precision import check_precision
from ..sine_kernel.core import DEFAULT_ORDER
from ..symbol import TrigPolynomial

DEFAULT_DIGITS = 20
DEFAULT_GRID_SIZE = 32
MATCHING = "matching"


class Command(str, Enum):
    LOGDET = "logdet"
    ASYM = "asym"
    VERIFY_THEOREM = "verify-theorem"
    EQUILIBRIUM = "equilibrium"
    PARAMETRIX_CHECK = "parametrix-check"
    SINE_KERNEL = "sine-kernel"
    CUE = "cue"


Grid = Annotated[tuple[ScalarField, ...], Field(min_length=1)]
IntGrid = Annotated[tuple[int, ...], Field(min_length=1)]
PARAMETRIX_OBJECTS = (*(o.value for o in JumpObject), MATCHING)


class RunConfig(BaseModel):
    """
    One CLI run: a subcommand and the parameter grids it sweeps.

    Grids are evaluated as the product θ0 × (s | x) × n (or y × s for the sine kernel) in
      the order given, n varying fastest. Without `precision` every computation picks its own
      (environment variable, then the per-operation default).
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    command: Command
    theta0: Grid = ("pi/2",)
    n: IntGrid = (10,)
    s: Grid | None = None
    x: Grid | None = None
    y: Grid = (1,)
    p: IntGrid | None = None
    lam: Grid | None = Field(default=None, alias="lambda")
    w: TrigPolynomial = Field(default_factory=TrigPolynomial, alias="W")
    precision: int | None = None
    digits: int = Field(default=DEFAULT_DIGITS, ge=5, le=1000)
    format: OutputFormat = OutputFormat.CSV
    out: Path | None = None
    k_max: int = Field(default=DEFAULT_K_MAX, ge=1)
    grid_size: int = Field(default=DEFAULT_GRID_SIZE, ge=8)
    m: int = Field(default=DEFAULT_ORDER, ge=4)
    side: Side = Side.PLUS
    objects: tuple[str, ...] = ("P-jump", "Pinf-jump", MATCHING)
    offset: ScalarField = None
    verbose: int = Field(default=0, ge=0)

    @field_validator("n", "p")
    @classmethod
    def _nonnegative(cls, values: tuple[int, ...] | None) -> tuple[int, ...] | None:
        if values is not None and any(v < 0 for v in values):
            raise ValueError(f"Grid values must be nonnegative, got {values}")
        return values

    @field_validator("objects")
    @classmethod
    def _known_objects(cls, objects: tuple[str, ...]) -> tuple[str, ...]:
        unknown = [o for o in objects if o not in PARAMETRIX_OBJECTS]
        if unknown or not objects:
            known = ", ".join(PARAMETRIX_OBJECTS)
            raise ValueError(f"objects must be among {known}, got {objects}")
        return objects

    @field_validator("precision")
    @classmethod
    def _precision(cls, bits: int | None) -> int | None:
        return None if bits is None else check_precision(bits)

    @model_validator(mode="after")
    def _one_gap_grid(self) -> "RunConfig":
        if self.s is not None and self.x is not None:
            raise ValueError("Give either an s grid or an x grid, not both")
        return self


FLAG_KEYS = {
    "theta0": "theta0 || grid.theta0",
    "n": "n || grid.n",
    "s": "s || grid.s",
    "x": "x || grid.x",
    "y": "y || grid.y",
    "p": "p || grid.p",
    "lambda": '"lambda" || grid."lambda"',
    "W": "W || w",
    "precision": "precision",
    "digits": "digits",
    "format": "format",
    "out": "out",
    "k_max": "k_max",
    "grid_size": "grid_size",
    "m": "m",
    "side": "side",
    "objects": "objects",
    "offset": "offset",
}
FILE_TOP_LEVEL_KEYS = {"grid", "w", "command", *FLAG_KEYS}


def _grid(text: str) -> list[str]:
    return split_list(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    """
    Options are read as text and typed by `RunConfig`. Parse errors raise `ConfigError`.
    """
    parser = _Parser(
        prog="gaptlz",
        description="Toeplitz determinants with a gap in the symbol: tables and numerical checks",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        p = sub.add_parser(command.value)
        p.add_argument("--config", type=Path, help="JSON file with defaults (flags override it)")
        p.add_argument("--theta0", type=_grid, help="Arc half-widths in radians, e.g. pi/2,1.2")
        p.add_argument("--n", type=_grid, help="Matrix sizes, e.g. 10,20,40")
        p.add_argument("--s", type=_grid, help="Gap values s in [0, 1]")
        p.add_argument("--x", type=_grid, help="Gap rates x with s = e^(-xn); inf allowed")
        p.add_argument("--y", type=_grid, help="Sine-kernel half-lengths")
        p.add_argument("--p", type=_grid, help="Tail thresholds for the cue bounds")
        p.add_argument("--lambda", dest="lam", type=_grid, help="Chernoff parameters λ >= 0")
        p.add_argument("--w", help='W as JSON, e.g. [{"k": 1, "re": 0.3}]')
        p.add_argument("--precision", help="Working precision in bits (>= 64)")
        p.add_argument("--digits", help="Significant digits of high-precision output")
        p.add_argument("--format", help="csv or json")
        p.add_argument("--out", type=Path, help="Output file (stdout without it)")
        p.add_argument("--k-max", dest="k_max", help="Terms of the W̃ series")
        p.add_argument("--grid-size", dest="grid_size", help="Equilibrium check grid")
        p.add_argument("--m", help="Nyström quadrature order")
        p.add_argument("--side", help="Lens side for S-jump: + or -")
        p.add_argument("--objects", type=_grid, help="parametrix-check objects")
        p.add_argument("--offset", help="Fixed offset instead of extrapolation to 0")
    return parser


def _read_file(path: Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ConfigTypeError(str(path), f"not valid JSON ({e.msg})")
    if not isinstance(data, dict):
        raise ConfigTypeError(str(path), "the config file must hold a JSON object")
    for key in data:
        if key not in FILE_TOP_LEVEL_KEYS:
            raise UnknownFlag(key)
    return {k: get(data, expr) for k, expr in FLAG_KEYS.items()}


def parse_config(args: Sequence[str] | None = None, file: str | Path | None = None) -> RunConfig:
    """
    Builds a `RunConfig` from command-line arguments and an optional JSON file.

    Values set on the command line override the file. The file may list the grids at the top
      level or under "grid".
    """
    ns, unknown = build_parser().parse_known_args(args)
    if unknown:
        raise UnknownFlag(unknown[0])
    flags = vars(ns)
    flags["lambda"] = flags.pop("lam")
    flags["W"] = flags.pop("w")
    config_file = flags.pop("config")
    config_file = file or config_file
    if flags["W"] is not None:
        try:
            flags["W"] = json.loads(flags["W"])
        except json.JSONDecodeError as e:
            raise ConfigTypeError("W", f"not valid JSON ({e.msg})")

    values = _read_file(config_file) if config_file else {}
    values = {**remove_empty_values(values), **remove_empty_values(flags)}
    try:
        return RunConfig(**values)
    except ValidationError as e:
        err = e.errors()[0]
        key = ".".join(str(part) for part in err["loc"]) or "config"
        if err["type"] == "extra_forbidden":
            raise UnknownFlag(key)
        raise ConfigTypeError(key, err["msg"])
