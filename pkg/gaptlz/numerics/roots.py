import logging
from collections.abc import Callable
from typing import Any

from mpmath import mp

from ..errors import NotConverged

logger = logging.getLogger(__name__)

MAX_BISECTIONS = 400


def bisect(
    fn: Callable[[Any], Any],
    lo: Any,
    hi: Any,
    tol: Any,
    max_iter: int = MAX_BISECTIONS,
    f_lo: Any = None,
    f_hi: Any = None,
) -> Any:
    """
    Root of `fn` in [lo, hi] by bisection. `fn(lo)` and `fn(hi)` must have opposite signs
      (or one of them is 0); the bracket is kept at every step.

    Known end values can be passed as `f_lo` / `f_hi` when `fn` is singular at an end.
    """
    f_lo = fn(lo) if f_lo is None else f_lo
    f_hi = fn(hi) if f_hi is None else f_hi
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError(
            f"Root is not bracketed: f({mp.nstr(lo, 8)})={mp.nstr(f_lo, 8)}, "
            f"f({mp.nstr(hi, 8)})={mp.nstr(f_hi, 8)}"
        )
    for i in range(max_iter):
        mid = (lo + hi) / 2
        if hi - lo <= tol:
            logger.debug(f"bisection converged after {i} steps")
            return mid
        f_mid = fn(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    raise NotConverged(f"Bisection did not reach width {mp.nstr(tol, 5)} in {max_iter} steps")
