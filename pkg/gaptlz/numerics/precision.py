import contextvars
import logging
import math
import os
from contextlib import contextmanager

from mpmath import mpf

logger = logging.getLogger(__name__)

PRECISION_ENV_VAR = "GAPTLZ_PRECISION"
DEFAULT_PRECISION = 128
MIN_PRECISION = 64
GUARD_BITS = 64
VALIDATION_EXTRA_BITS = 64

_WorkingPrecision: contextvars.ContextVar[int | None] = contextvars.ContextVar(
    "_WorkingPrecision", default=None
)


@contextmanager
def working_precision(bits: int):
    """
    Sets the default precision for every `precision=None` call made inside the block.
    """
    check_precision(bits)
    token = _WorkingPrecision.set(bits)
    try:
        yield
    finally:
        _WorkingPrecision.reset(token)


def check_precision(bits: int) -> int:
    if not isinstance(bits, int) or isinstance(bits, bool):
        raise ValueError(f"Precision must be an integer number of bits, got {bits!r}")
    if bits < MIN_PRECISION:
        raise ValueError(f"Precision must be at least {MIN_PRECISION} bits, got {bits}")
    return bits


def env_precision() -> int | None:
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    try:
        return check_precision(int(raw))
    except ValueError as e:
        raise ValueError(f"Invalid {PRECISION_ENV_VAR}={raw!r}: {e}")


def default_precision(fallback: int = DEFAULT_PRECISION) -> int:
    """
    Precision used when a call passes `precision=None`:
      active `working_precision` block, then the environment variable, then `fallback`.
    """
    if (bits := _WorkingPrecision.get()) is not None:
        return bits
    if (bits := env_precision()) is not None:
        return bits
    return fallback


def resolve_precision(precision: int | None, fallback: int = DEFAULT_PRECISION) -> int:
    if precision is None:
        return default_precision(fallback)
    return check_precision(precision)


def auto_precision(n: int, theta0: float | mpf) -> int:
    """
    Precision policy for Toeplitz determinants of size n with arc half-width theta0.

    The smallest pivot of the moment matrix behaves like sin(theta0/2)^(2n), so twice
      that many bits plus guard bits keeps the factorization honest.
    """
    log_sin = abs(math.log(math.sin(float(theta0) / 2)))
    return max(DEFAULT_PRECISION, math.ceil(4 * n * log_sin / math.log(2)) + GUARD_BITS)


def tolerance(bits: int, fraction: float = 1.0) -> mpf:
    """
    2^-(fraction * bits), evaluated at the current working precision.
    """
    return mpf(2) ** (-int(fraction * bits))


def agree(a, b, bits: int, fraction: float = 0.75) -> bool:
    scale = max(mpf(1), abs(a), abs(b))
    return abs(a - b) <= tolerance(bits, fraction) * scale
