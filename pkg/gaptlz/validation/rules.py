from __future__ import annotations

from collections.abc import Callable
from typing import Any

from result import Err, Ok, Result

from ..lib.util import get

Outcome = Result[tuple["Rule", Any, Any], tuple["Rule", Any, Any]]


class Rule:
    """
    A named predicate on one report value. Calling it gives
    - Ok((rule, value, result)) when the predicate holds
    - Err((rule, value, result | exception)) otherwise

    With `at_key`, a dict source is first narrowed with a jmespath lookup.
    """

    def __init__(
        self, fn: Callable[[Any], Any], at_key: str | None = None, name: str | None = None
    ):
        self.fn = fn
        self.at_key = at_key
        self._name = name

    def __call__(self, source: Any) -> Outcome:
        value = get(source, self.at_key) if self.at_key and isinstance(source, dict) else source
        if isinstance(value, Ok):
            value = value.ok_value
        try:
            verdict = self.fn(value)
        except Exception as e:
            return Err((self, value, e))
        return Ok((self, value, verdict)) if verdict else Err((self, value, verdict))

    @property
    def name(self) -> str:
        return self._name or getattr(self.fn, "__name__", type(self).__name__)

    def __repr__(self) -> str:
        key = f" at {self.at_key}" if self.at_key else ""
        return f"<Rule {self.name}{key}>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rule):
            return NotImplemented
        return (self.fn, self.at_key) == (other.fn, other.at_key)

    def __hash__(self) -> int:
        return hash((self.fn, self.at_key))
