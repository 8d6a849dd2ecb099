from collections.abc import Sequence
from typing import Any


def neville(xs: Sequence[Any], ys: Sequence[Any], at: Any = 0) -> Any:
    """
    Value at `at` of the polynomial interpolating (xs[i], ys[i]), by Neville's scheme.

    Used to extrapolate one-sided quantities computed at small offsets to offset 0.
    """
    if len(xs) != len(ys) or not xs:
        raise ValueError(f"Need matching, non-empty nodes and values, got {len(xs)}, {len(ys)}")
    p = list(ys)
    n = len(xs)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            p[i] = ((at - xs[j]) * p[i] + (xs[i] - at) * p[i + 1]) / (xs[i] - xs[j])
    return p[0]
