"""
The logarithmic potential f(z) = 2 ∫ log |z - e^{iθ}| dμ(e^{iθ}) and the Euler-Lagrange
conditions it has to satisfy against the field V:

    f - V + ℓ = 0 on the support J,    f - V + ℓ <= 0 off J.
"""

import logging
from typing import Any

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict

from ..lib.types import Regime, Scalar
from ..numerics.precision import tolerance
from ..numerics.quadrature import endpoint_integrate
from .core import EquilibriumData, _centered, _density, _positive

logger = logging.getLogger(__name__)

MIN_GRID_SIZE = 8
# A margin at or below this counts as the inequality touching
CONTACT_TOL = mpf(10) ** -10


class EquilibriumReport(BaseModel):
    """
    Grid check of the variational conditions. `min_margin` is the smallest V - ℓ - f found
      off the support; `contact_points` lists the gap angles where it vanishes.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    regime: Regime
    theta1: Any
    ell: Any
    equality_residual: Any
    min_margin: Any
    grid: int
    contact_points: tuple[Any, ...] = ()
    strict: bool


def _arc_piece(g: Any, lo: Any, hi: Any, alpha: Any, bits: int) -> Any:
    """
    ∫_lo^hi g for g with square-root behaviour at both ends and a log singularity at
      `alpha` when it lies in [lo, hi].
    """
    if lo < alpha < hi:
        left = endpoint_integrate(g, lo, alpha, bits, left="sqrt", right="log")
        return left + endpoint_integrate(g, alpha, hi, bits, left="log", right="sqrt")
    # A log singularity on top of an endpoint is covered by the stronger grading
    left_kind = "log" if alpha == lo else "sqrt"
    right_kind = "log" if alpha == hi else "sqrt"
    return endpoint_integrate(g, lo, hi, bits, left=left_kind, right=right_kind)


def log_potential(data: EquilibriumData, alpha: Scalar, precision: int | None = None) -> Any:
    """
    f(e^{iα}) = (1/π) ∫_J log |e^{iα} - e^{iθ}| sqrt((cos θ + cos θ1) / (cos θ - cos θ0)) dθ
    """
    bits = precision or data.precision_bits
    with mp.workprec(bits):
        theta0, theta1 = data.theta0, data.theta1
        a = _centered(alpha)

        def integrand(t: Any) -> Any:
            return 2 * mp.log(abs(2 * mp.sin((a - t) / 2))) * _density(t, theta0, theta1)

        total = _arc_piece(integrand, -theta0, +theta0, a, bits)
        if theta1 > 0:
            total += _arc_piece(integrand, mp.pi - theta1, mp.pi + theta1, _positive(a), bits)
        return total


def _midpoints(lo: Any, hi: Any, count: int) -> list[Any]:
    return [lo + (hi - lo) * (2 * j + 1) / (2 * count) for j in range(count)]


def variational_residuals(
    data: EquilibriumData, grid_size: int = 32, precision: int | None = None
) -> EquilibriumReport:
    """
    Evaluates f at `grid_size` interior points of every arc and every gap component.
      At x = +∞ the field is infinite off the support and the margin is +∞.
    """
    if grid_size < MIN_GRID_SIZE:
        raise ValueError(f"grid_size must be at least {MIN_GRID_SIZE}, got {grid_size}")
    bits = precision or data.precision_bits
    with mp.workprec(bits):
        equality = mpf(0)
        for lo, hi in data.arcs():
            for alpha in _midpoints(lo, hi, grid_size):
                residual = log_potential(data, alpha, bits) - data.field(alpha) + data.ell
                equality = max(equality, abs(residual))

        gap_points = [a for lo, hi in data.gaps() for a in _midpoints(lo, hi, grid_size)]
        if data.theta1 == 0 and all(abs(a - mp.pi) > tolerance(bits) for a in gap_points):
            gap_points.append(+mp.pi)
        margins = []
        if data.x != mp.inf:
            for alpha in sorted(gap_points):
                margin = data.x - data.ell - log_potential(data, alpha, bits)
                margins.append((alpha, margin))
        min_margin = min((m for _, m in margins), default=mp.inf)
        contact = tuple(a for a, m in margins if m <= CONTACT_TOL)
        logger.debug(
            f"{data.regime.value}: equality residual {mp.nstr(equality, 5)}, "
            f"margin {mp.nstr(min_margin, 5)} on {len(gap_points)} gap points"
        )
        return EquilibriumReport(
            regime=data.regime,
            theta1=data.theta1,
            ell=data.ell,
            equality_residual=equality,
            min_margin=min_margin,
            grid=grid_size,
            contact_points=contact,
            strict=not contact,
        )
