"""
Local parametrices in the disks around z0, z̄0 and -1, and the residual checks for the jump
and matching conditions of every parametrix.

One-sided boundary values are taken at `point ± i·d·offset`, where d is the unit tangent of
the oriented contour at `point`, so the + side is on the left.
"""

import logging
from collections.abc import Callable, Sequence
from typing import Any

from mpmath import mp, mpc, mpf

from ..errors import DomainError, OnContour, OutsideDisk
from ..lib.expr import to_mp
from ..lib.matrix import Matrix2C
from ..lib.types import Contour, JumpObject, LocalPoint, Scalar
from ..numerics.extrapolation import neville
from ..numerics.precision import resolve_precision, tolerance
from ..numerics.quadrature import MAX_PANEL_WIDTH, endpoint_integrate, graded_breaks
from .bessel import RAY_ANGLE, bessel_model_psi, psi_hat
from .context import ParametrixContext
from .core import (
    _dphi,
    _phi_gap,
    global_parametrix,
    phi_function,
    phi_on_gap,
    s_jump_matrix,
)

logger = logging.getLogger(__name__)

DEFAULT_OFFSETS = (mpf(10) ** -4, mpf(10) ** -5, mpf(10) ** -6, mpf(10) ** -7)
DEFAULT_MATCHING_POINTS = 12
# A point counts as lying on a contour within this fraction of the working bits
ON_CONTOUR_FRACTION = 0.5

_ARC_JUMP = Matrix2C.of(((0, 1), (-1, 0)))


def _e_matrix(ctx: ParametrixContext, z: Any, phi: Any, bits: int) -> Matrix2C:
    half_w = ctx.w.value(z) / 2
    rotation = Matrix2C.of(((1, mpc(0, -1)), (mpc(0, -1), 1))) * (1 / mp.sqrt(2))
    scale = Matrix2C.sigma3_power(mp.sqrt(ctx.n * mp.pi * phi / 2))
    return global_parametrix(ctx, z, bits) @ Matrix2C.exp_sigma3(half_w) @ rotation @ scale


def e_matrix(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Matrix2C:
    """
    E(z) = P^(∞)(z) e^{Wσ3/2} (1/√2)[[1, -i], [-i, 1]] (nπφ(z)/2)^{σ3/2}, analytic in D(z0, r).
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = to_mp(z)
        ctx.check_in_disk(z, LocalPoint.Z0)
        return _e_matrix(ctx, z, phi_function(ctx, z, bits), bits)


def _z0_parametrix(ctx: ParametrixContext, z: Any, bits: int) -> Matrix2C:
    ctx.check_in_disk(z, LocalPoint.Z0)
    phi = phi_function(ctx, z, bits)
    zeta = (ctx.n * phi) ** 2 / 16
    model = psi_hat(zeta, ctx.nx(), bits)
    tail = Matrix2C.exp_sigma3(-(ctx.n * phi + ctx.w.value(z)) / 2)
    return _e_matrix(ctx, z, phi, bits) @ model @ tail


def _gap_arc_breaks(center: Any, half_width: Any, z: Any) -> list[Any]:
    """Panel edges in α for the arc π ± half_width with a near-singularity at z."""
    if abs(z) == 0:
        return []
    arc_alpha = mp.arg(-z) + mp.pi
    clamped = min(max(arc_alpha, center - half_width), center + half_width)
    distance = abs(z - mp.expj(clamped))
    if distance >= MAX_PANEL_WIDTH:
        return []
    return graded_breaks(clamped, distance)


def h_tilde(ctx: ParametrixContext, z: Scalar, precision: int | None = None) -> Any:
    """
    h̃(z) = (1/2πi) ∫_{S1 ∩ D(-1, r)} e^{nφ(s) - nx + W(s)} ds / (s - z): the Cauchy transform
      of the gap jump near -1, which vanishes for x = ∞.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = to_mp(z)
        nx = ctx.nx()
        if nx == mp.inf:
            return mpc(0)
        theta0, n = ctx.theta0_value(), ctx.n
        half_width = 2 * mp.asin(ctx.radius() / 2)
        if abs(abs(z) - 1) <= tolerance(bits, 0.9) and abs(mp.arg(-z)) <= half_width:
            raise OnContour(f"z={mp.nstr(z, 10)} lies on the gap arc inside D(-1, r)")

        def integrand(a: Any) -> Any:
            s = mp.expj(a)
            return mp.exp(n * _phi_gap(theta0, a) - nx + ctx.w.value(s)) * s / (s - z)

        lo, hi = mp.pi - half_width, mp.pi + half_width
        breaks = _gap_arc_breaks(mp.pi, half_width, z)
        return endpoint_integrate(integrand, lo, hi, bits, breaks=breaks) / (2 * mp.pi)


def local_parametrix(
    ctx: ParametrixContext, z: Scalar, which: LocalPoint | str, precision: int | None = None
) -> Matrix2C:
    """
    The local parametrix in the disk around `which`:

        z0:      E(z) Ψ̂(n²ζ(z)) e^{-nφ(z)σ3/2} e^{-W(z)σ3/2}
        zbar0:   the reflection conj(P(conj z)) of the z0 parametrix
        minus1:  P^(∞)(z) [[1, h̃(z)], [0, 1]]
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = to_mp(z)
        match LocalPoint(which):
            case LocalPoint.Z0:
                return _z0_parametrix(ctx, z, bits)
            case LocalPoint.ZBAR0:
                if not ctx.w.is_real():
                    logger.warning(
                        "W has complex coefficients; the reflected parametrix at z̄0 does not "
                        "carry the jumps of the problem"
                    )
                ctx.check_in_disk(z, LocalPoint.ZBAR0)
                return _z0_parametrix(ctx, mp.conj(z), bits).conj()
            case LocalPoint.MINUS1:
                ctx.check_in_disk(z, LocalPoint.MINUS1)
                return global_parametrix(ctx, z, bits) @ Matrix2C.upper(h_tilde(ctx, z, bits))


Evaluator = Callable[[Any], Matrix2C]


def _classify_zeta(zeta: Any, bits: int, with_positive_axis: bool) -> tuple[Any, str]:
    """Unit direction and name of the contour of Ψ (or Ψ̂) through ζ."""
    tol = tolerance(bits, ON_CONTOUR_FRACTION)
    a = mp.arg(zeta)
    if zeta != 0 and mp.pi - abs(a) <= tol:
        return mpf(1), "negative axis"
    if zeta != 0 and abs(abs(a) - RAY_ANGLE) <= tol:
        return -mp.expj(a), "ray"
    if with_positive_axis and zeta != 0 and abs(a) <= tol:
        return mpf(1), "positive axis"
    raise DomainError(f"ζ={mp.nstr(zeta, 10)} is not on a contour of the Bessel model")


def _psi_data(
    ctx: ParametrixContext | None, obj: JumpObject, zeta: Any, bits: int
) -> tuple[Evaluator, Any, Matrix2C]:
    nx = None
    if obj == JumpObject.PSI_HAT:
        if ctx is None:
            raise ValueError("The Ψ̂ jump needs a context for nx")
        nx = ctx.nx()
    direction, where = _classify_zeta(zeta, bits, nx is not None)
    if where == "negative axis":
        jump = _ARC_JUMP
    elif where == "ray":
        jump = Matrix2C.lower(1)
    else:
        jump = Matrix2C.upper(mp.exp(-nx))

    def evaluate(p: Any) -> Matrix2C:
        if nx is None:
            return bessel_model_psi(p, bits)
        return psi_hat(p, nx, bits)

    return evaluate, direction, jump


def _on_circle(point: Any, bits: int) -> bool:
    return abs(abs(point) - 1) <= tolerance(bits, ON_CONTOUR_FRACTION)


def _arc_jump(ctx: ParametrixContext, point: Any) -> Matrix2C:
    w = ctx.w.value(point)
    return Matrix2C.of(((0, mp.exp(w)), (-mp.exp(-w), 0)))


def _gap_jump(ctx: ParametrixContext, point: Any, bits: int) -> Matrix2C:
    nx = ctx.nx()
    if nx == mp.inf:
        return Matrix2C.identity()
    phi = phi_on_gap(ctx, mp.arg(point), bits)
    return Matrix2C.upper(mp.exp(ctx.n * phi - nx + ctx.w.value(point)))


def _p_data(ctx: ParametrixContext, point: Any, bits: int) -> tuple[Evaluator, Any, Matrix2C]:
    which = ctx.locate(point)
    if which is None:
        raise OutsideDisk(f"z={mp.nstr(point, 10)} is not inside any of the local disks")
    theta0 = ctx.theta0_value()

    def evaluate(p: Any) -> Matrix2C:
        return local_parametrix(ctx, p, which, bits)

    if which == LocalPoint.MINUS1:
        if not _on_circle(point, bits):
            raise DomainError(f"z={mp.nstr(point, 10)} is not on a contour of P near -1")
        return evaluate, mpc(0, 1) * point, _gap_jump(ctx, point, bits)
    if _on_circle(point, bits):
        jump = _arc_jump(ctx, point) if abs(mp.arg(point)) < theta0 else _gap_jump(ctx, point, bits)
        return evaluate, mpc(0, 1) * point, jump
    # Off the circle the only contour of P is the lens, the preimage of the rays of Ψ
    z_eval = mp.conj(point) if which == LocalPoint.ZBAR0 else point
    phi = phi_function(ctx, z_eval, bits)
    direction, where = _classify_zeta(phi * phi / 16, bits, False)
    # dζ/dz = φφ'/8
    d = direction / (phi * _dphi(theta0, z_eval))
    d /= abs(d)
    if which == LocalPoint.ZBAR0:
        # Reflected lens, oriented so that its jump is the conjugate of the z0 one
        d, phi = -mp.conj(d), mp.conj(phi)
    jump = Matrix2C.lower(mp.exp(-ctx.n * phi - ctx.w.value(point)))
    logger.debug(f"P lens point {mp.nstr(point, 8)} in the {which.value} disk ({where})")
    return evaluate, d, jump


def _jump_data(
    ctx: ParametrixContext | None, obj: JumpObject, point: Any, bits: int
) -> tuple[Evaluator, Any, Matrix2C]:
    """The evaluator, the unit tangent at `point` and the jump matrix expected there."""
    if obj in (JumpObject.PSI, JumpObject.PSI_HAT):
        return _psi_data(ctx, obj, point, bits)
    if ctx is None:
        raise ValueError(f"The {obj.value} check needs a parametrix context")
    if obj == JumpObject.P:
        return _p_data(ctx, point, bits)
    if obj != JumpObject.P_INF:
        raise ValueError(f"No one-sided evaluation for {obj.value}")
    if not (_on_circle(point, bits) and abs(mp.arg(point)) < ctx.theta0_value()):
        raise DomainError(f"z={mp.nstr(point, 10)} is not on γ")

    def evaluate(p: Any) -> Matrix2C:
        return global_parametrix(ctx, p, bits)

    return evaluate, mpc(0, 1) * point, _arc_jump(ctx, point)


def _s_contour(ctx: ParametrixContext, point: Any, bits: int) -> Contour:
    if not _on_circle(point, bits):
        return Contour.LENS
    return Contour.ARC if abs(mp.arg(point)) < ctx.theta0_value() else Contour.GAP


def _jump_defect(
    ctx: ParametrixContext | None, obj: JumpObject, point: Any, offset: Any, bits: int
) -> Matrix2C:
    """L(point + i·d·offset) - L(point - i·d·offset)·J"""
    evaluate, d, jump = _jump_data(ctx, obj, point, bits)
    shift = mpc(0, 1) * d * offset
    return evaluate(point + shift) - evaluate(point - shift) @ jump


def jump_residual(
    ctx: ParametrixContext | None,
    obj: JumpObject | str,
    point: Scalar,
    offset: Scalar,
    precision: int | None = None,
) -> mpf:
    """
    ‖L_+ - L_- J‖ for the object L at `point` on one of its contours, with the boundary values
      taken at distance `offset`. The point is a ζ-value for the Bessel models and a z-value
      otherwise; `ctx` may be None for "Psi-jump".

    The S problem is not built: its residual is ‖J_S - I‖, which measures how close the jump
      is to the identity away from γ.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        obj, point, offset = JumpObject(obj), to_mp(point), to_mp(offset)
        if offset <= 0:
            raise ValueError(f"offset must be positive, got {mp.nstr(offset, 6)}")
        if obj == JumpObject.S:
            if ctx is None:
                raise ValueError("The S-jump check needs a parametrix context")
            jump = s_jump_matrix(ctx, point, _s_contour(ctx, point, bits), bits)
            return (jump - Matrix2C.identity()).norm()
        return _jump_defect(ctx, obj, point, offset, bits).norm()


def extrapolated_jump_residual(
    ctx: ParametrixContext | None,
    obj: JumpObject | str,
    point: Scalar,
    offsets: Sequence[Scalar] = DEFAULT_OFFSETS,
    precision: int | None = None,
) -> mpf:
    """
    The jump defect L_+ - L_- J evaluated at each offset and extrapolated entrywise to offset 0.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        obj, point = JumpObject(obj), to_mp(point)
        if obj == JumpObject.S:
            return jump_residual(ctx, obj, point, offsets[0], bits)
        xs = [to_mp(o) for o in offsets]
        if any(o <= 0 for o in xs):
            raise ValueError(f"offsets must be positive, got {offsets!r}")
        defects = [_jump_defect(ctx, obj, point, o, bits).entries() for o in xs]
        limit = [neville(xs, [d[i] for d in defects]) for i in range(4)]
        res = Matrix2C(*limit).norm()
        logger.debug(f"{obj.value} at {mp.nstr(point, 8)}: extrapolated residual {mp.nstr(res, 5)}")
        return res


def matching_residual(
    ctx: ParametrixContext,
    which: LocalPoint | str,
    count: int = DEFAULT_MATCHING_POINTS,
    precision: int | None = None,
) -> mpf:
    """
    max ‖P(z) P^(∞)(z)^{-1} - I‖ over `count` points z = c + r e^{2πi(j + 1/4)/count} on the
      boundary of the disk around c = `which`.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        which = LocalPoint(which)
        center, r = ctx.center(which), ctx.radius()
        worst = mpf(0)
        for j in range(count):
            z = center + r * mp.expj(2 * mp.pi * (j + mpf(1) / 4) / count)
            local = local_parametrix(ctx, z, which, bits)
            outer = global_parametrix(ctx, z, bits)
            worst = max(worst, (local @ outer.inv() - Matrix2C.identity()).norm())
        logger.info(f"matching on ∂D({which.value}) with n={ctx.n}: {mp.nstr(worst, 5)}")
        return worst
