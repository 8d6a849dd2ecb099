from collections.abc import Callable, Mapping
from typing import Any

from result import Err, Ok, Result

from ..lib.util import get
from .rules import Rule

OK_LABEL = "ok"


def validate(
    source: dict[str, Any],
    checks: Mapping[str, Rule | Callable],
) -> Result[dict[str, Any], list[tuple[str, Any]]]:
    """
    Runs each check on the value of `source` at its key (a jmespath expression).

    Returns `Ok(source)` when every check passes, else `Err` with one `(key, err_value)` pair per
      failing check, where `err_value` is the `(rule, value, result | exception)` tuple.
    """
    failed: list[tuple[str, Any]] = []
    for k, check in checks.items():
        if not callable(check):
            raise TypeError(f"Expected a Rule or callable at {k}, got: {type(check)}")
        rule = check if isinstance(check, Rule) else Rule(check)
        res = rule(get(source, k))
        if isinstance(res, Err):
            failed.append((k, res.err_value))
    if failed:
        return Err(failed)
    return Ok(source)


def summarize(res: Result[Any, list[tuple[str, Any]]]) -> str:
    """
    "ok", or the failing keys joined by ";" for a report column.
    """
    match res:
        case Ok():
            return OK_LABEL
        case Err(failures):
            return ";".join(k for k, _ in failures)
    raise TypeError(f"Expected a Result, got: {type(res)}")
