import logging
from collections.abc import Callable, Sequence
from functools import lru_cache
from typing import Any, Literal

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import QuadratureNotConverged
from .precision import resolve_precision, tolerance

logger = logging.getLogger(__name__)

MAX_ORDER = 4096
START_ORDER = 24
MAX_PANEL_WIDTH = 0.5
# Power used by the `log` endpoint substitution x = a + (c - a) * t^p
LOG_GRADING_POWER = 8
# Integrands are evaluated with this many extra bits; convergence is judged at the caller's bits
QUADRATURE_GUARD_BITS = 24

EndpointKind = Literal["sqrt", "log"]


class QuadratureRule(BaseModel):
    """
    Gauss-Legendre rule on (-1, 1): nodes strictly increasing, positive weights summing to 2.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    nodes: tuple[Any, ...]
    weights: tuple[Any, ...]
    order: int
    precision_bits: int

    @model_validator(mode="after")
    def _check_shape(self) -> "QuadratureRule":
        if len(self.nodes) != self.order or len(self.weights) != self.order:
            raise ValueError(f"Rule of order {self.order} needs {self.order} nodes and weights")
        return self


def gauss_legendre(m: int, precision: int | None = None) -> QuadratureRule:
    """
    Gauss-Legendre nodes and weights of order `m` at `precision` bits.

    Roots of P_m are found by Newton's method from the usual cosine guesses, with P_m and
      P_m' from the three-term recurrence. Deterministic for fixed (m, precision) and cached.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"Quadrature order must be a positive integer, got {m!r}")
    if m > MAX_ORDER:
        raise ValueError(f"Quadrature order {m} exceeds the configured cap {MAX_ORDER}")
    return _gauss_legendre(m, resolve_precision(precision))


@lru_cache(maxsize=256)
def _gauss_legendre(m: int, bits: int) -> QuadratureRule:
    with mp.workprec(bits + 32):
        eps = tolerance(bits + 16)
        roots = []
        for i in range(1, (m + 1) // 2 + 1):
            x = mp.cos(mp.pi * (i - mpf(1) / 4) / (m + mpf(1) / 2))
            for _ in range(100):
                p, dp = _legendre_with_derivative(m, x)
                dx = p / dp
                x -= dx
                if abs(dx) <= eps:
                    break
            p, dp = _legendre_with_derivative(m, x)
            roots.append((x, 2 / ((1 - x * x) * dp * dp)))

    with mp.workprec(bits):
        pairs: list[tuple[mpf, mpf]] = []
        for idx, (x, w) in enumerate(roots):
            if m % 2 == 1 and idx == len(roots) - 1:
                # Middle root of an odd-order rule is exactly 0
                pairs.append((mpf(0), +w))
            else:
                pairs.extend([(+x, +w), (-x, +w)])
        pairs.sort(key=lambda xw: xw[0])
        return QuadratureRule(
            nodes=tuple(x for x, _ in pairs),
            weights=tuple(w for _, w in pairs),
            order=m,
            precision_bits=bits,
        )


def _legendre_with_derivative(m: int, x: mpf) -> tuple[mpf, mpf]:
    p0, p1 = mpf(1), x
    for k in range(2, m + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = m * (x * p1 - p0) / (x * x - 1)
    return p1, dp


def subdivide(edges: Sequence[Any], max_width: float = MAX_PANEL_WIDTH) -> list[Any]:
    """
    Inserts breakpoints so no panel is wider than `max_width`. Keeps the given breakpoints.
    """
    res = [edges[0]]
    for a, b in zip(edges, edges[1:]):
        k = max(1, int(mp.ceil(abs(b - a) / max_width)))
        res.extend(a + (b - a) * mpf(j) / k for j in range(1, k + 1))
    return res


def composite_nodes(edges: Sequence[Any], m: int, bits: int) -> list[tuple[Any, Any]]:
    """
    (x, w) pairs of the order-m Gauss-Legendre rule applied on every panel of `edges`.
    """
    rule = _gauss_legendre(m, bits)
    res = []
    for a, b in zip(edges, edges[1:]):
        half, mid = (b - a) / 2, (a + b) / 2
        res.extend((mid + half * x, half * w) for x, w in zip(rule.nodes, rule.weights))
    return res


def weighted_sum(f: Callable[[Any], Any], nodes: Sequence[tuple[Any, Any]]) -> Any:
    """
    Σ w f(x). `f` may return a scalar or a list (summed elementwise).
    """
    total: Any = None
    for x, w in nodes:
        v = f(x)
        if isinstance(v, list | tuple):
            wv = [w * vi for vi in v]
            total = wv if total is None else [t + u for t, u in zip(total, wv)]
        else:
            total = w * v if total is None else total + w * v
    return total


def _size(v: Any) -> Any:
    if isinstance(v, list | tuple):
        return max((abs(vi) for vi in v), default=mpf(0))
    return abs(v)


def _distance(a: Any, b: Any) -> Any:
    if isinstance(a, list | tuple):
        return max((abs(x - y) for x, y in zip(a, b)), default=mpf(0))
    return abs(a - b)


def converge(
    compute: Callable[[int], Any],
    bits: int,
    tol: Any = None,
    start_order: int = START_ORDER,
    max_order: int = 1024,
    what: str = "integral",
) -> Any:
    """
    Evaluates `compute(m)` for m = start, 2*start, ... until two successive orders agree to
      `tol` (relative to max(1, |value|)) and returns the higher-order value.
    """
    tol = tolerance(bits, 0.9) if tol is None else tol
    m = start_order
    prev = compute(m)
    while 2 * m <= max_order:
        m *= 2
        curr = compute(m)
        scale = max(mpf(1), _size(curr))
        if _distance(curr, prev) <= tol * scale:
            logger.debug(f"{what} converged at order {m}")
            return curr
        prev = curr
    raise QuadratureNotConverged(
        f"{what}: orders {m // 2} and {m} disagree by {mp.nstr(_distance(curr, prev), 5)}"
    )


def panel_integrate(
    f: Callable[[Any], Any],
    edges: Sequence[Any],
    precision: int | None = None,
    max_width: float = MAX_PANEL_WIDTH,
    tol: Any = None,
    max_order: int = 1024,
) -> Any:
    """
    ∫ f over [edges[0], edges[-1]] with f analytic on every panel between breakpoints.

    Panels are refined to `max_width`, then the Gauss-Legendre order is doubled from 24
      until two successive orders agree; otherwise `QuadratureNotConverged`.
    """
    bits = resolve_precision(precision)
    work = bits + QUADRATURE_GUARD_BITS
    with mp.workprec(work):
        panels = subdivide([+e for e in edges], max_width)
        res = converge(
            lambda m: weighted_sum(f, composite_nodes(panels, m, work)),
            bits,
            tol=tol,
            max_order=max_order,
        )
    with mp.workprec(bits):
        return _round(res)


def _endpoint_piece(
    f: Callable[[Any], Any],
    end: Any,
    other: Any,
    kind: EndpointKind,
    max_width: float,
    breaks: Sequence[Any] = (),
) -> tuple[Callable[[Any], Any], list[Any]]:
    """
    Rewrites the integral of f over the segment between `end` and `other` as ∫ g(t) dt
      over t-panels, with a substitution that is smooth at `end`: x = end ± t^2 for
      square-root behaviour, x = end + (other - end) t^p for logarithmic behaviour.
      Breakpoints strictly inside the segment are carried over to t.
    """
    sign = 1 if other > end else -1
    length = abs(other - end)
    inner = [abs(b - end) for b in breaks if 0 < sign * (b - end) < length]
    if kind == "sqrt":

        def g(t):
            return f(end + sign * t * t) * 2 * t

        edges = [mpf(0)] + sorted(mp.sqrt(d) for d in inner) + [mp.sqrt(length)]
        return g, subdivide(edges, max_width)

    p = LOG_GRADING_POWER

    def g(t):
        return f(end + sign * length * t**p) * length * p * t ** (p - 1)

    return g, [mpf(0)] + sorted(mp.root(d / length, p) for d in inner) + [mpf(1)]


def endpoint_integrate(
    f: Callable[[Any], Any],
    a: Any,
    b: Any,
    precision: int | None = None,
    left: EndpointKind | None = None,
    right: EndpointKind | None = None,
    max_width: float = MAX_PANEL_WIDTH,
    tol: Any = None,
    max_order: int = 1024,
    breaks: Sequence[Any] = (),
) -> Any:
    """
    ∫_a^b f for f analytic inside (a, b) with integrable endpoint singularities:
      `sqrt` for (x - end)^(±1/2) behaviour, `log` for log|x - end| behaviour.

    The interval is split at its midpoint and each singular half gets its own substitution.
      Extra `breaks` inside (a, b) become panel edges, e.g. `graded_breaks` around a nearby
      pole.
    """
    bits = resolve_precision(precision)
    work = bits + QUADRATURE_GUARD_BITS
    with mp.workprec(work):
        a, b = +a, +b
        if a > b:
            raise ValueError(f"endpoint_integrate expects a < b, got [{a}, {b}]")
        c = (a + b) / 2
        pieces: list[tuple[Callable[[Any], Any], list[Any]]] = []
        inner = sorted(+t for t in breaks if a < t < b)
        if left and right:
            pieces.append(_endpoint_piece(f, a, c, left, max_width, inner))
            pieces.append(_endpoint_piece(f, b, c, right, max_width, inner))
        elif left:
            pieces.append(_endpoint_piece(f, a, b, left, max_width, inner))
        elif right:
            pieces.append(_endpoint_piece(f, b, a, right, max_width, inner))
        else:
            pieces.append((f, subdivide([a, *inner, b], max_width)))

        def compute(m: int) -> Any:
            total: Any = None
            for g, panels in pieces:
                v = weighted_sum(g, composite_nodes(panels, m, work))
                total = v if total is None else _add(total, v)
            return total

        res = converge(compute, bits, tol=tol, max_order=max_order)
    with mp.workprec(bits):
        return _round(res)


def _add(x: Any, y: Any) -> Any:
    if isinstance(x, list):
        return [xi + yi for xi, yi in zip(x, y)]
    return x + y


def _round(v: Any) -> Any:
    if isinstance(v, list):
        return [+vi for vi in v]
    return +v


def graded_breaks(center: Any, gap: Any, limit: Any = MAX_PANEL_WIDTH, ratio: int = 2) -> list[Any]:
    """
    Breakpoints center ± gap·ratio^j (j = 0, 1, ...) out to `limit`, for integrands with a
      near-singularity at distance `gap` from `center` on the real line.
    """
    res = [center]
    if gap <= 0:
        return res
    d = gap
    while d < limit:
        res.extend((center - d, center + d))
        d *= ratio
    return sorted(res)
