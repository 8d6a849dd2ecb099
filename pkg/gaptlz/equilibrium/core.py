import logging
from typing import Any

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict, model_validator

from ..asymptotics import x_critical
from ..errors import DomainError, EndpointSingular, OutsideGap, OutsideSupport
from ..lib.expr import is_inf, to_mpf
from ..lib.types import Regime, Scalar
from ..numerics.precision import resolve_precision, tolerance
from ..numerics.quadrature import endpoint_integrate, panel_integrate
from ..numerics.roots import bisect

logger = logging.getLogger(__name__)

# |x - x_c| below this fraction of the working bits counts as the critical case
CRITICAL_MATCH_FRACTION = 0.75


class EquilibriumData(BaseModel):
    """
    The equilibrium measure for the field V = 0 on the arc |θ| <= θ0, V = x on the rest of
      the circle. `theta1` is 0 unless a second arc [π - θ1, π + θ1] carries mass.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: Any
    theta0: Any
    regime: Regime
    theta1: Any = mpf(0)
    ell: Any
    x_c: Any
    precision_bits: int

    @model_validator(mode="after")
    def _check(self) -> "EquilibriumData":
        if (self.regime == Regime.TWO_ARC) != (self.theta1 > 0):
            raise ValueError(f"theta1={self.theta1} does not match the {self.regime.value} regime")
        return self

    def arcs(self) -> list[tuple[Any, Any]]:
        """The support J as angle intervals."""
        res = [(-self.theta0, +self.theta0)]
        if self.theta1 > 0:
            res.append((mp.pi - self.theta1, mp.pi + self.theta1))
        return res

    def gaps(self) -> list[tuple[Any, Any]]:
        """The complement of J as angle intervals inside (θ0, 2π - θ0)."""
        if self.theta1 > 0:
            return _gap_sides(self)
        return [(+self.theta0, 2 * mp.pi - self.theta0)]

    def field(self, theta: Any) -> Any:
        """V(e^{iθ})"""
        return mpf(0) if abs(_centered(theta)) <= self.theta0 else self.x


def _centered(theta: Any) -> Any:
    # Into (-π, π]
    theta = mp.fmod(to_mpf(theta), 2 * mp.pi)
    if theta > mp.pi:
        theta -= 2 * mp.pi
    elif theta <= -mp.pi:
        theta += 2 * mp.pi
    return theta


def _positive(theta: Any) -> Any:
    # Into [0, 2π)
    theta = _centered(theta)
    return theta + 2 * mp.pi if theta < 0 else theta


def _density_ratio(theta: Any, theta0: Any, theta1: Any) -> Any:
    """(cos θ + cos θ1) / (cos θ - cos θ0), written with products to keep endpoint digits."""
    num = 2 * mp.cos((theta + theta1) / 2) * mp.cos((theta - theta1) / 2)
    den = 2 * mp.sin((theta0 + theta) / 2) * mp.sin((theta0 - theta) / 2)
    return num / den


def _density(theta: Any, theta0: Any, theta1: Any) -> Any:
    return mp.sqrt(abs(_density_ratio(theta, theta0, theta1))) / (2 * mp.pi)


def _log_cot_half(theta: Any) -> Any:
    """log |(1 + e^{iθ}) / (1 - e^{iθ})|"""
    return mp.log(abs(mp.cot(theta / 2)))


def eq_density(data: EquilibriumData, theta: Scalar) -> Any:
    """
    u(e^{iθ}) = (1/2π) sqrt((cos θ + cos θ1) / (cos θ - cos θ0)) on the support.
    """
    with mp.workprec(data.precision_bits):
        t = _centered(theta)
        endpoint_tol = tolerance(data.precision_bits, 0.9)
        if abs(abs(t) - data.theta0) <= endpoint_tol:
            raise EndpointSingular(f"θ={mp.nstr(t, 10)} is an endpoint ±θ0 of the support")
        on_first = abs(t) < data.theta0
        on_second = data.theta1 > 0 and mp.pi - abs(t) <= data.theta1
        if not (on_first or on_second):
            raise OutsideSupport(f"θ={mp.nstr(t, 10)} lies outside the support")
        return _density(t, data.theta0, data.theta1)


def arc_log_moment(theta0: Scalar, theta1: Scalar, precision: int | None = None) -> Any:
    """
    2 ∫_J log |(1 + e^{iθ}) / (1 - e^{iθ})| u(e^{iθ}) dθ, which equals f(-1) - f(1) for the
      measure with parameter θ1. Decreases from x_c at θ1 = 0 to 0 at θ1 = π - θ0.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0, theta1 = to_mpf(theta0), to_mpf(theta1)

        def integrand(t: Any) -> Any:
            return _log_cot_half(t) * _density(t, theta0, theta1)

        # Both the density and the weight are even in θ
        total = endpoint_integrate(integrand, mpf(0), theta0, bits, left="log", right="sqrt")
        if theta1 > 0:
            total += endpoint_integrate(
                integrand, mp.pi - theta1, +mp.pi, bits, left="sqrt", right="log"
            )
        return 4 * total


def gap_integral(theta0: Scalar, theta1: Scalar, precision: int | None = None) -> Any:
    """
    ∫_{θ0}^{π - θ1} sqrt((cos θ1 + cos α) / (cos θ0 - cos α)) dα: f(-1) - f(1) computed by
      integrating the derivative of the potential across the gap.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0, theta1 = to_mpf(theta0), to_mpf(theta1)

        def integrand(a: Any) -> Any:
            return mp.sqrt(abs(_density_ratio(a, theta0, theta1)))

        end = mp.pi - theta1
        return endpoint_integrate(integrand, theta0, end, bits, left="sqrt", right="sqrt")


def theta1_solve(x: Scalar, theta0: Scalar, precision: int | None = None) -> Any:
    """
    θ1 in (0, π - θ0) with arc_log_moment(θ0, θ1) = x, by bisection. Needs 0 < x < x_c.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        x, theta0 = to_mpf(x), to_mpf(theta0)
        x_c = x_critical(theta0, bits)
        if not 0 < x < x_c:
            raise DomainError(
                f"A second arc needs 0 < x < x_c = {mp.nstr(x_c, 10)}, got {mp.nstr(x, 10)}"
            )
        return bisect(
            lambda t: arc_log_moment(theta0, t, bits) - x,
            mpf(0),
            mp.pi - theta0,
            tolerance(bits, 0.5),
            f_lo=x_c - x,
            f_hi=-x,
        )


def ell_closed_form(theta0: Scalar, precision: int | None = None) -> Any:
    """ℓ = -2 ln sin(θ0/2), valid whenever x >= x_c."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        return -2 * mp.log(mp.sin(to_mpf(theta0) / 2))


def ell_integral(theta0: Scalar, theta1: Scalar, precision: int | None = None) -> Any:
    """
    ℓ = -∫_0^1 (1/t) (1 - sqrt((t² + 2t cos θ1 + 1) / (t² - 2t cos θ0 + 1))) dt.

    The integrand tends to -(cos θ0 + cos θ1) at t = 0 and is smooth up to t = 1.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        c0, c1 = mp.cos(to_mpf(theta0)), mp.cos(to_mpf(theta1))

        def integrand(t: Any) -> Any:
            return (1 - mp.sqrt((t * t + 2 * c1 * t + 1) / (t * t - 2 * c0 * t + 1))) / t

        return -panel_integrate(integrand, [mpf(0), mpf(1)], bits)


def equilibrium(theta0: Scalar, x: Scalar, precision: int | None = None) -> EquilibriumData:
    """
    Solves for the support and the constant ℓ given θ0 and x > 0 (x = "inf" allowed).
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0 = to_mpf(theta0)
        x_c = x_critical(theta0, bits)
        x_value = mp.inf if is_inf(x) else to_mpf(x)
        if x_value <= 0:
            raise DomainError(f"x must be positive, got {mp.nstr(x_value, 10)}")

        critical_tol = tolerance(bits, CRITICAL_MATCH_FRACTION) * max(1, x_c)
        if x_value != mp.inf and abs(x_value - x_c) <= critical_tol:
            regime, theta1, ell = Regime.CRITICAL, mpf(0), ell_closed_form(theta0, bits)
        elif x_value > x_c:
            regime, theta1, ell = Regime.ONE_ARC, mpf(0), ell_closed_form(theta0, bits)
        else:
            regime = Regime.TWO_ARC
            theta1 = theta1_solve(x_value, theta0, bits)
            ell = ell_integral(theta0, theta1, bits)
        logger.debug(f"equilibrium at θ0={mp.nstr(theta0, 8)}, x={mp.nstr(x_value, 8)}: {regime}")
        return EquilibriumData(
            x=x_value,
            theta0=theta0,
            regime=regime,
            theta1=theta1,
            ell=ell,
            x_c=x_c,
            precision_bits=bits,
        )


def eq_ell(data: EquilibriumData, precision: int | None = None) -> Any:
    bits = precision or data.precision_bits
    if data.theta1 == 0:
        return ell_closed_form(data.theta0, bits)
    return ell_integral(data.theta0, data.theta1, bits)


def normalization(data: EquilibriumData, precision: int | None = None) -> Any:
    """∫_J u dθ, which should be 1."""
    bits = precision or data.precision_bits
    with mp.workprec(bits):
        theta0, theta1 = data.theta0, data.theta1

        def u(t: Any) -> Any:
            return _density(t, theta0, theta1)

        total = endpoint_integrate(u, mpf(0), theta0, bits, right="sqrt")
        if theta1 > 0:
            total += endpoint_integrate(u, mp.pi - theta1, +mp.pi, bits, left="sqrt")
        return 2 * total


def gap_potential_derivative(data: EquilibriumData, alpha: Scalar) -> Any:
    """
    d/dα f(e^{iα}) on the gap: +sqrt((cos θ1 + cos α) / (cos θ0 - cos α)) on (θ0, π - θ1)
      and the negative root on (π + θ1, 2π - θ0).
    """
    with mp.workprec(data.precision_bits):
        a = _positive(alpha)
        for sign, (lo, hi) in zip((1, -1), _gap_sides(data)):
            if lo < a < hi:
                return sign * mp.sqrt(abs(_density_ratio(a, data.theta0, data.theta1)))
        if data.theta1 == 0 and a == mp.pi:
            return mpf(0)
        raise OutsideGap(f"α={mp.nstr(a, 10)} is not inside a gap of the support")


def _gap_sides(data: EquilibriumData) -> list[tuple[Any, Any]]:
    # Gap left and right of -1; they share the endpoint π when there is no second arc
    return [(data.theta0, mp.pi - data.theta1), (mp.pi + data.theta1, 2 * mp.pi - data.theta0)]
