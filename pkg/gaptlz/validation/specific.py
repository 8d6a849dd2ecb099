"""
Numeric rules for the check columns of the reports: every value is read with `to_mp`, so
plain floats, mpmath numbers and expressions such as "1e-8" all work as bounds.
"""

from collections.abc import Sequence
from typing import Any

from mpmath import mp

from ..lib.expr import to_mp
from ..lib.types import Scalar
from .rules import Rule


def _real(v: Any) -> Any:
    v = to_mp(v)
    return v.real if mp.im(v) == 0 else v


class IsFinite(Rule):
    def __init__(self, at_key: str | None = None):
        def is_finite(v: Any) -> bool:
            return bool(mp.isfinite(to_mp(v)))

        super().__init__(is_finite, at_key, "IsFinite")


class AtMost(Rule):
    def __init__(self, upper: Scalar, at_key: str | None = None):
        def at_most(v: Any) -> bool:
            return bool(_real(v) <= to_mp(upper))

        super().__init__(at_most, at_key, f"AtMost({upper})")


class AtLeast(Rule):
    def __init__(self, lower: Scalar, at_key: str | None = None):
        def at_least(v: Any) -> bool:
            return bool(_real(v) >= to_mp(lower))

        super().__init__(at_least, at_key, f"AtLeast({lower})")


class CloseTo(Rule):
    """
    |v - target| <= tol, or <= tol·|target| with `relative`.
    """

    def __init__(
        self,
        target: Scalar,
        tol: Scalar,
        relative: bool = False,
        at_key: str | None = None,
    ):
        def close_to(v: Any) -> bool:
            t = to_mp(target)
            bound = to_mp(tol) * (abs(t) if relative else 1)
            return bool(abs(to_mp(v) - t) <= bound)

        super().__init__(close_to, at_key, f"CloseTo({target}, {tol})")


class Decreasing(Rule):
    """
    A sequence whose consecutive ratios are all below `ratio` (strictly decreasing with the
      default ratio 1). Magnitudes are compared with `absolute`.
    """

    def __init__(
        self,
        ratio: Scalar = 1,
        absolute: bool = True,
        at_key: str | None = None,
    ):
        def decreasing(values: Sequence[Any]) -> bool:
            xs = [abs(to_mp(v)) if absolute else _real(v) for v in values]
            r = to_mp(ratio)
            return all(b < r * a for a, b in zip(xs, xs[1:]))

        super().__init__(decreasing, at_key, f"Decreasing({ratio})")
