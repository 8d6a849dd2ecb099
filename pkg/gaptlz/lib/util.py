import re
from collections.abc import Callable, Collection
from typing import Any, TypeVar

import jmespath

DL = TypeVar("DL", dict[str, Any], list[Any], Any)

COMMAS_IGNORING_BRACKETS_BRACES = r",(?![^{}\[\]]*[}\]])"


def get(source: dict[str, Any] | list[Any] | None, key: str, default: Any = None) -> Any:
    """
    Gets a value from a (nested) dict using a jmespath expression.
    Handles None-checking (instead of raising error, returns default).

    `key` notes:
     - Use `.` to chain gets, e.g. `grid.n`
     - Use `||` to fall back between layouts, e.g. `n || grid.n`
    """
    if not source:
        return default
    res = jmespath.search(key, source)
    return default if res is None else res


def remove_empty_values(input: DL) -> DL:
    """
    Recursively removes "empty" objects (`None` and/or objects only containing `None` values).
    """
    if isinstance(input, list):
        return [remove_empty_values(v) for v in input if has_content(v)]
    elif isinstance(input, dict):
        return {k: remove_empty_values(v) for k, v in input.items() if has_content(v)}
    return input


def has_content(obj: Any) -> bool:
    """
    Checks if the object has "content" (a non-`None` value), and/or contains at least one item
      with "content".
    """
    res = obj is not None
    if res and isinstance(obj, Collection) and not isinstance(obj, str):
        res = len(obj) > 0
        if isinstance(obj, list):
            res = any(has_content(item) for item in obj)
        elif isinstance(obj, dict):
            res = any(has_content(item) for item in obj.values())
    return res


def split_list(text: str, parse: Callable[[str], Any] = str) -> list[Any]:
    """
    Splits a comma list like `10,20,40` or `pi/2, 2*pi/5`, leaving commas inside `[]`/`{}` alone.
    """
    parts = [p.strip() for p in re.split(COMMAS_IGNORING_BRACKETS_BRACES, text)]
    return [parse(p) for p in parts if p]
