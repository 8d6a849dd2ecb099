"""
The scalar functions and the global parametrix of the steepest-descent analysis for x >= x_c,
where the equilibrium measure lives on γ = {e^{iθ} : |θ| <= θ0} with density
u(θ) = (1/2π) sqrt((1 + cos θ) / (cos θ - cos θ0)).

Branch conventions used throughout:

- R(z) = ((z - z0)(z - z̄0))^{1/2} has its cut on γ and R(z) ~ z at infinity; its boundary
  value from inside the circle is R_+(e^{iθ}) = -e^{iθ/2} sqrt(2 (cos θ - cos θ0)).
- log z is taken with arg z in [0, 2π), so g and φ are analytic off γ and [0, ∞).
- The + side of γ is the inside of the circle (left of the counterclockwise orientation).
"""

import logging
from functools import lru_cache
from typing import Any

from mpmath import mp, mpc, mpf

from ..errors import (
    BranchAmbiguity,
    DomainError,
    NotConverged,
    OnContour,
    OutsideGap,
    PathCrossesCut,
    PoleError,
)
from ..lib.expr import to_mp, to_mpf
from ..lib.matrix import Matrix2C
from ..lib.types import Contour, LocalPoint, Scalar, Side
from ..numerics.precision import resolve_precision, tolerance
from ..numerics.quadrature import (
    MAX_PANEL_WIDTH,
    EndpointKind,
    endpoint_integrate,
    graded_breaks,
)
from .context import ParametrixContext

logger = logging.getLogger(__name__)

# g is not evaluated closer than this to γ: the branch of the logarithm is ambiguous there
BRANCH_TOL = mpf(10) ** -8
NEWTON_STEPS = 60


def _positive_arg(z: Any) -> mpf:
    """arg z in [0, 2π)"""
    a = mp.arg(z)
    return a + 2 * mp.pi if a < 0 else a


def _log(z: Any) -> mpc:
    return mpc(mp.log(abs(z)), _positive_arg(z))


def _distance_to_arc(theta0: mpf, z: Any) -> mpf:
    a = mp.arg(z)
    if abs(a) <= theta0:
        return abs(abs(z) - 1)
    return min(abs(z - mp.expj(theta0)), abs(z - mp.expj(-theta0)))


def _arc_breaks(theta0: mpf, z: Any) -> list[Any]:
    """Panel edges in θ for an integrand over γ with a near-singularity at z."""
    distance = _distance_to_arc(theta0, z)
    if distance >= MAX_PANEL_WIDTH:
        return []
    center = max(-theta0, min(theta0, mp.arg(z)))
    return graded_breaks(center, distance)


def _arc_integral(f: Any, theta0: mpf, z: Any, bits: int) -> Any:
    breaks = _arc_breaks(theta0, z)
    return endpoint_integrate(f, -theta0, theta0, bits, left="sqrt", right="sqrt", breaks=breaks)


def _check_off_arc(theta0: mpf, z: Any, bits: int) -> None:
    if _distance_to_arc(theta0, z) <= tolerance(bits, 0.9):
        raise OnContour(f"z={mp.nstr(z, 10)} lies on γ; use one-sided offsets")


def _density(theta: Any, theta0: mpf) -> Any:
    return mp.cos(theta / 2) / (
        2 * mp.pi * mp.sqrt(mp.sin((theta0 + theta) / 2) * mp.sin((theta0 - theta) / 2))
    )


def _arc_root(theta: Any, theta0: mpf) -> Any:
    """sqrt(2 (cos θ - cos θ0)) on γ"""
    return 2 * mp.sqrt(mp.sin((theta0 + theta) / 2) * mp.sin((theta0 - theta) / 2))


def _root(theta0: mpf, z: Any) -> Any:
    # Möbius image w = (z - z0)/(z - z̄0) sends γ onto the ray arg w = θ0 + π
    z0 = mp.expj(theta0)
    zb = mp.conj(z0)
    if z == zb:
        return mpc(0)
    return (z - zb) * mp.expj(theta0 / 2) * mp.sqrt(mp.expj(-theta0) * (z - z0) / (z - zb))


def branch_root(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Any:
    """R(z) = ((z - z0)(z - z̄0))^{1/2}, cut on γ, R(z) ~ z as z -> ∞."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        return _root(ctx.theta0_value(), to_mp(z))


def _dphi(theta0: mpf, xi: Any) -> Any:
    return (xi + 1) / (_root(theta0, xi) * xi)


def _beta(theta0: mpf, z: Any) -> Any:
    """((z - z̄0)/(z - z0))^{1/4}, cut on γ, -> 1 at infinity"""
    z0 = mp.expj(theta0)
    return mp.expj(-theta0 / 4) * mp.root(z0 * (z - mp.conj(z0)) / (z - z0), 4)


def g_function(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Any:
    """
    g(z) = ∫_γ log(z - e^{iθ}) u(θ) dθ, with the branch fixed by

        g(z) = iπ + ∫ log(1 - z e^{-iθ}) u dθ         for |z| <= 1,
        g(z) = log z + ∫ log(1 - e^{iθ}/z) u dθ       for |z| > 1.

    The two agree on the gap, so g(0) = iπ and g(z) - log z -> 0 at infinity.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = to_mp(z)
        theta0 = ctx.theta0_value()
        if _distance_to_arc(theta0, z) < BRANCH_TOL:
            raise BranchAmbiguity(f"z={mp.nstr(z, 10)} is within {BRANCH_TOL} of γ")
        inside = abs(z) <= 1

        def integrand(t: Any) -> Any:
            w = mp.expj(t)
            term = mp.log(1 - z / w) if inside else mp.log(1 - w / z)
            return term * _density(t, theta0)

        total = _arc_integral(integrand, theta0, z, bits)
        return (mpc(0, mp.pi) if inside else _log(z)) + total


def phi_function(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Any:
    """
    φ(z) = ∫_{z0}^{z} (ξ + 1) / R(ξ) dξ/ξ, which equals 2g(z) - log z - iπ + ℓ.

    The path runs from z0 (from z̄0 when arg z >= π) radially to the circle of radius |z|
      and then along it, so it never meets γ, the origin or the positive real axis. φ is
      real and non-negative on the gap and vanishes at z0 and z̄0.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = to_mp(z)
        theta0 = ctx.theta0_value()
        if z == 0:
            raise PoleError("φ has a logarithmic singularity at z = 0")
        tol = tolerance(bits, 0.9)
        if min(abs(z - ctx.z0()), abs(z - mp.conj(ctx.z0()))) <= tol:
            return mpc(0)
        if _distance_to_arc(theta0, z) <= tol:
            raise PathCrossesCut(f"z={mp.nstr(z, 10)} lies on the cut γ of φ")
        return _phi(theta0, z, bits)


def _phi(theta0: mpf, z: Any, bits: int) -> Any:
    rho, target = abs(z), _positive_arg(z)
    start = theta0 if target < mp.pi else 2 * mp.pi - theta0
    gap = abs(rho - 1)
    total = mpc(0)
    if gap > tolerance(bits, 0.9):
        u = mp.expj(start)

        def radial(t: Any) -> Any:
            return _dphi(theta0, t * u) * u

        if rho > 1:
            total += endpoint_integrate(radial, mpf(1), rho, bits, left="sqrt")
        else:
            total -= endpoint_integrate(radial, rho, mpf(1), bits, right="sqrt")
    else:
        rho, gap = mpf(1), mpf(0)

    if target != start:

        def along(t: Any) -> Any:
            xi = rho * mp.expj(t)
            return _dphi(theta0, xi) * mpc(0, 1) * xi

        lo, hi = min(start, target), max(start, target)
        # On the circle itself the path starts at the branch point
        singular: EndpointKind | None = "sqrt" if gap == 0 else None
        breaks = graded_breaks(start, gap) if 0 < gap < MAX_PANEL_WIDTH else []
        value = endpoint_integrate(
            along,
            lo,
            hi,
            bits,
            left=singular if lo == start else None,
            right=singular if hi == start else None,
            breaks=breaks,
        )
        total += value if target > start else -value
    return total


def _phi_gap(theta0: mpf, alpha: Any) -> Any:
    return 2 * mp.acosh(mp.sin(alpha / 2) / mp.sin(theta0 / 2))


def phi_on_gap(ctx: ParametrixContext, alpha: Scalar, precision: int | None = None) -> mpf:
    """
    φ(e^{iα}) for α in [θ0, 2π - θ0]: 2 arccosh(sin(α/2) / sin(θ0/2)), increasing to
      x_c at α = π.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0 = ctx.theta0_value()
        a = _positive_arg(mp.expj(to_mpf(alpha)))
        tol = tolerance(bits, 0.9)
        if not theta0 - tol <= a <= 2 * mp.pi - theta0 + tol:
            raise OutsideGap(f"α={mp.nstr(a, 10)} is not on the gap [θ0, 2π - θ0]")
        return _phi_gap(theta0, min(max(a, theta0), 2 * mp.pi - theta0))


def szego_h(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Any:
    """
    h(z) = R(z)/(2πi) ∫_γ W(ξ) / (R_+(ξ)(ξ - z)) dξ, the solution of h_+ + h_- = W on γ that
      is bounded near z0, z̄0 and ∞.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        if ctx.w.is_zero():
            return mpc(0)
        z = to_mp(z)
        theta0 = ctx.theta0_value()
        _check_off_arc(theta0, z, bits)

        def integrand(t: Any) -> Any:
            w = mp.expj(t)
            return ctx.w.value(w) * mp.expj(t / 2) / (_arc_root(t, theta0) * (w - z))

        return -_root(theta0, z) / (2 * mp.pi) * _arc_integral(integrand, theta0, z, bits)


@lru_cache(maxsize=64)
def _h_infinity(ctx: ParametrixContext, bits: int) -> Any:
    with mp.workprec(bits):
        if ctx.w.is_zero():
            return mpc(0)
        theta0 = ctx.theta0_value()

        def integrand(t: Any) -> Any:
            return ctx.w.value(mp.expj(t)) * mp.expj(t / 2) / _arc_root(t, theta0)

        total = endpoint_integrate(integrand, -theta0, theta0, bits, left="sqrt", right="sqrt")
        return total / (2 * mp.pi)


def h_infinity(ctx: ParametrixContext, precision: int | None = None) -> Any:
    """h(∞) = (1/2π) ∫_γ W(e^{iθ}) e^{iθ/2} / sqrt(2 (cos θ - cos θ0)) dθ"""
    return _h_infinity(ctx, resolve_precision(precision))


def global_parametrix(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Any:
    """
    P^(∞)(z) = e^{h(∞)σ3} [[(β + 1/β)/2, -(β - 1/β)/(2i)], [(β - 1/β)/(2i), (β + 1/β)/2]]
      e^{-h(z)σ3}, which jumps by [[0, e^W], [-e^{-W}, 0]] across γ and tends to I.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = to_mp(z)
        theta0 = ctx.theta0_value()
        _check_off_arc(theta0, z, bits)
        beta = _beta(theta0, z)
        a, b = (beta + 1 / beta) / 2, (beta - 1 / beta) / mpc(0, 2)
        core = Matrix2C(a, -b, b, a)
        h = szego_h(ctx, z, bits)
        return Matrix2C.exp_sigma3(_h_infinity(ctx, bits)) @ core @ Matrix2C.exp_sigma3(-h)


def conformal_map_zeta(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Any:
    """ζ(z) = φ(z)²/16 on D(z0, r): sends γ to ℝ⁻ and the gap to ℝ⁺, with ζ(z0) = 0."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = to_mp(z)
        ctx.check_in_disk(z, LocalPoint.Z0)
        return phi_function(ctx, z, bits) ** 2 / 16


def zeta_preimage(ctx: ParametrixContext, w: Scalar, precision: int | None = None) -> Any:
    """
    The z in D(z0, r) with ζ(z) = w, by Newton's method with ζ' = φ φ'/8 started from the
      linearization at z0. With w on the rays arg w = ±2π/3 this traces the lens through z0
      on which the local parametrix jumps.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        w = to_mp(w)
        theta0, z0 = ctx.theta0_value(), ctx.z0()
        if w == 0:
            return z0
        # Slope at z0 from a point just off z0 into the gap
        z_near = z0 + ctx.radius() / 1000 * mpc(0, 1) * z0
        slope = _phi(theta0, z_near, bits) ** 2 / (16 * (z_near - z0))
        z = z0 + w / slope
        for step in range(NEWTON_STEPS):
            phi = _phi(theta0, z, bits)
            dz = (phi * phi / 16 - w) / (phi * _dphi(theta0, z) / 8)
            z -= dz
            if abs(dz) <= tolerance(bits, 0.8):
                logger.debug(f"ζ preimage converged after {step + 1} Newton steps")
                ctx.check_in_disk(z, LocalPoint.Z0)
                return z
        raise NotConverged(f"Newton for ζ(z) = {mp.nstr(w, 8)} did not converge")


def lens_points(
    ctx: ParametrixContext, side: Side | str, count: int, precision: int | None = None
) -> list[Any]:
    """
    `count` points on a lens, ordered from z0 to z̄0: the circular arc through z0 and z̄0
      crossing the real axis at 1 - lens_offset (side "+", inside the circle) or
      1 + lens_offset (side "-").
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z0 = ctx.z0()
        zb = mp.conj(z0)
        crossing = 1 - ctx.lens_bulge() if Side(side) == Side.PLUS else 1 + ctx.lens_bulge()
        # Circles through z0 and z̄0 are rays under w = (z - z0)/(z - z̄0)
        ray = (crossing - z0) / (crossing - zb)
        res = []
        for j in range(count):
            u = mpf(2 * j + 1) / (2 * count)
            w = ray * u / (1 - u)
            res.append((z0 - zb * w) / (1 - w))
        return res


def s_jump_matrix(
    ctx: ParametrixContext, point: Scalar, contour: Contour | str, precision: int | None = None
) -> Matrix2C:
    """
    Jump of the opened-lens problem at `point`:

        gap:   [[1, e^{-nx} e^{nφ} e^{W}], [0, 1]]
        arc:   [[0, e^{W}], [-e^{-W}, 0]]
        lens:  [[1, 0], [e^{-nφ} e^{-W}, 1]]
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        point = to_mp(point)
        contour = Contour(contour)
        theta0 = ctx.theta0_value()
        w = ctx.w.value(point)
        on_circle = abs(abs(point) - 1) <= tolerance(bits, 0.75)
        match contour:
            case Contour.ARC:
                if not (on_circle and abs(mp.arg(point)) < theta0):
                    raise DomainError(f"{mp.nstr(point, 10)} is not on γ")
                return Matrix2C.of(((0, mp.exp(w)), (-mp.exp(-w), 0)))
            case Contour.GAP:
                if not on_circle:
                    raise DomainError(f"{mp.nstr(point, 10)} is not on the unit circle")
                nx = ctx.nx()
                if nx == mp.inf:
                    return Matrix2C.identity()
                phi = phi_on_gap(ctx, mp.arg(point), bits)
                return Matrix2C.upper(mp.exp(ctx.n * phi - nx + w))
            case Contour.LENS:
                if on_circle:
                    raise DomainError(f"{mp.nstr(point, 10)} lies on the circle, not a lens")
                phi = phi_function(ctx, point, bits)
                return Matrix2C.lower(mp.exp(-ctx.n * phi - w))
