import json
from pathlib import Path

import pytest

from gaptlz.cli import Command, RunConfig, parse_config
from gaptlz.errors import ConfigError, ConfigTypeError, UnknownFlag
from gaptlz.lib.types import OutputFormat, Side


def test_parse_flags() -> None:
    config = parse_config(["logdet", "--theta0", "1.5707963", "--n", "10", "--s", "0"])
    assert config.command == Command.LOGDET
    assert config.theta0 == ("1.5707963",)
    assert config.n == (10,)
    assert config.s == ("0",)
    assert config.x is None
    assert config.format == OutputFormat.CSV
    assert config.precision is None


def test_parse_grids() -> None:
    config = parse_config(
        ["cue", "--theta0", "pi/3,pi/2", "--n", "4,8", "--p", "2", "--lambda", "1"]
    )
    assert config.theta0 == ("pi/3", "pi/2")
    assert config.n == (4, 8)
    assert config.p == (2,)
    assert config.lam == ("1",)


def test_parse_w() -> None:
    config = parse_config(["asym", "--w", '{"1": "0.3", "-1": "0.3"}'])
    assert config.w.degree == 1
    assert config.w.is_symmetric_real()


def test_defaults() -> None:
    config = RunConfig(command="equilibrium")
    assert config.theta0 == ("pi/2",)
    assert config.objects == ("P-jump", "Pinf-jump", "matching")
    assert config.w.is_zero()


def test_gap_grids_are_exclusive() -> None:
    with pytest.raises(ConfigTypeError):
        parse_config(["logdet", "--s", "0.5", "--x", "1"])


def test_unknown_flag() -> None:
    with pytest.raises(UnknownFlag) as e:
        parse_config(["logdet", "--bogus", "1"])
    assert e.value.flag == "--bogus"


def test_bad_values() -> None:
    with pytest.raises(ConfigTypeError) as e:
        parse_config(["logdet", "--precision", "32"])
    assert e.value.key == "precision"
    with pytest.raises(ConfigTypeError):
        parse_config(["logdet", "--n", "-3"])
    with pytest.raises(ConfigTypeError):
        parse_config(["parametrix-check", "--objects", "Q-jump"])
    with pytest.raises(ConfigTypeError):
        parse_config(["logdet", "--theta0", "pi/"])
    # Options are typed by the model, so malformed text names its key
    for flag, text, key in [
        ("--precision", "abc", "precision"),
        ("--digits", "many", "digits"),
        ("--w", "{bad", "W"),
        ("--format", "xml", "format"),
        ("--side", "left", "side"),
    ]:
        with pytest.raises(ConfigTypeError) as e:
            parse_config(["parametrix-check", flag, text])
        assert e.value.key == key


def test_typed_options() -> None:
    config = parse_config(
        ["parametrix-check", "--precision", "256", "--m", "24", "--format", "json", "--side", "-"]
    )
    assert config.precision == 256
    assert config.m == 24
    assert config.format == OutputFormat.JSON
    assert config.side == Side.MINUS


def test_verbose() -> None:
    assert parse_config(["logdet"]).verbose == 0
    assert parse_config(["-v", "-v", "logdet"]).verbose == 2


def test_parser_errors() -> None:
    with pytest.raises(ConfigError):
        parse_config([])
    with pytest.raises(ConfigError):
        parse_config(["determinant"])
    with pytest.raises(ConfigError):
        parse_config(["logdet", "--n"])


def test_config_file(tmp_path: Path) -> None:
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps(
            {
                "grid": {"theta0": ["pi/2"], "n": [10, 20], "lambda": ["0.5"]},
                "precision": 128,
                "W": {"1": "0.3", "-1": "0.3"},
            }
        )
    )
    config = parse_config(["cue", "--config", str(path), "--precision", "256"])
    # Flags override the file
    assert config.precision == 256
    assert config.n == (10, 20)
    assert config.lam == ("0.5",)
    assert config.w.degree == 1
    assert parse_config(["cue"], file=path).precision == 128


def test_config_file_errors(tmp_path: Path) -> None:
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"thetaO": [1]}))
    with pytest.raises(UnknownFlag):
        parse_config(["logdet"], file=unknown)
    # -v is a flag only
    unknown.write_text(json.dumps({"verbose": 2}))
    with pytest.raises(UnknownFlag):
        parse_config(["logdet"], file=unknown)
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ConfigTypeError):
        parse_config(["logdet"], file=broken)
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]")
    with pytest.raises(ConfigTypeError):
        parse_config(["logdet"], file=listed)
