import logging
from typing import Any

from mpmath import mp, mpf
from mpmath.libmp import NoConvergence

from ..errors import DomainError, NonConvergence, PoleError
from ..lib.types import BesselKind
from .precision import agree, resolve_precision
from .quadrature import panel_integrate

logger = logging.getLogger(__name__)

# Extra bits used to validate a special-function value against itself
BESSEL_CHECK_BITS = 32
# Largest |z| evaluated by the Taylor series of ln G(1+z); beyond it the recurrence shifts z
BARNES_TAYLOR_RADIUS = mpf(1) / 2

_REGULAR_AT_ZERO = {BesselKind.I, BesselKind.I_PRIME}


def _bessel0_raw(kind: BesselKind, z: Any) -> Any:
    match kind:
        case BesselKind.I:
            return mp.besseli(0, z)
        case BesselKind.K:
            return mp.besselk(0, z)
        case BesselKind.H1:
            return mp.hankel1(0, z)
        case BesselKind.H2:
            return mp.hankel2(0, z)
        case BesselKind.I_PRIME:
            return mp.besseli(1, z)
        case BesselKind.K_PRIME:
            return -mp.besselk(1, z)
        case BesselKind.H1_PRIME:
            return -mp.hankel1(1, z)
        case BesselKind.H2_PRIME:
            return -mp.hankel2(1, z)
    raise ValueError(f"Unknown Bessel kind: {kind!r}")


def bessel0(kind: BesselKind | str, z: Any, precision: int | None = None) -> Any:
    """
    Order-zero modified Bessel (I0, K0) and Hankel (H0^(1), H0^(2)) functions and their first
      derivatives, principal branch (cut on the negative real axis).

    mpmath switches between the power series and the large-argument expansion internally;
      the value is accepted only if a second evaluation with extra bits agrees with it.
    """
    kind = BesselKind(kind)
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        z = mp.mpmathify(z)
        if z == 0 and kind not in _REGULAR_AT_ZERO:
            raise DomainError(f"{kind.value}_0 is singular at z=0")
        try:
            with mp.workprec(bits + BESSEL_CHECK_BITS):
                reference = _bessel0_raw(kind, z)
            value = _bessel0_raw(kind, z)
        except NoConvergence as e:
            raise NonConvergence(f"{kind.value}_0({mp.nstr(z, 8)}) did not converge: {e}")
        if not agree(value, reference, bits, fraction=0.8):
            raise NonConvergence(
                f"{kind.value}_0({mp.nstr(z, 8)}) is not stable at {bits} bits "
                f"(difference {mp.nstr(abs(value - reference), 5)})"
            )
        return +value


def ln_barnes_g(z: Any, precision: int | None = None) -> Any:
    """
    ln G(1+z) for the Barnes G-function.

    - |z| <= 1/2: Taylor series
        z/2 ln(2π) - (z + (1+γ) z^2)/2 + Σ_{k>=2} (-1)^k ζ(k) z^(k+1) / (k+1)
    - otherwise the real part is shifted into [-1/2, 1/2] with ln G(1+z) = ln Γ(z) + ln G(z),
      and if |z| is still too large the integral representation
        ln G(1+z) = z/2 ln(2π) - z(z+1)/2 + z ln Γ(1+z) - ∫_0^z ln Γ(1+t) dt
      is used along the segment [0, z].

    The value is the sum of principal log-gamma values, so it is continuous along the
      imaginary axis (and equals 0 at z = 0 and z = 1).
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits + 16):
        z = mp.mpmathify(z)
        if mp.im(z) == 0 and mp.re(z) <= -1 and mp.isint(mp.re(z)):
            raise PoleError(f"G(1+z) vanishes at z={mp.nstr(z, 8)}: ln G(1+z) has a pole")
        res = _shifted_ln_barnes_g(z, bits)
    with mp.workprec(bits):
        return +res


def _shifted_ln_barnes_g(z: Any, bits: int) -> Any:
    # Positive shift count: ln G(1+z) = ln G(1+z-1) + ln Γ(z)
    shift = int(mp.nint(mp.re(z)))
    w = z - shift
    acc = mpf(0)
    if shift > 0:
        for j in range(shift):
            acc += mp.loggamma(w + 1 + j)
    elif shift < 0:
        # ln G(1+z) = ln G(2+z) - ln Γ(1+z)
        for j in range(-shift):
            acc -= mp.loggamma(z + 1 + j)
    return acc + _small_ln_barnes_g(w, bits)


def _small_ln_barnes_g(w: Any, bits: int) -> Any:
    if w == 0:
        return mpf(0)
    if abs(w) <= BARNES_TAYLOR_RADIUS:
        return _barnes_taylor(w, bits)
    return _barnes_integral(w, bits)


def _barnes_taylor(w: Any, bits: int) -> Any:
    res = w / 2 * mp.log(2 * mp.pi) - (w + (1 + mp.euler) * w * w) / 2
    eps = mpf(2) ** (-bits - 8)
    power = w * w
    for k in range(2, 20 * bits):
        power *= w
        term = (-1) ** k * mp.zeta(k) * power / (k + 1)
        res += term
        if abs(term) <= eps * max(1, abs(res)):
            return res
    raise NonConvergence(f"Taylor series of ln G(1+z) did not converge at z={mp.nstr(w, 8)}")


def _barnes_integral(w: Any, bits: int) -> Any:
    integral = panel_integrate(
        lambda u: w * mp.loggamma(1 + u * w),
        [mpf(0), mpf(1)],
        precision=bits + 16,
        max_width=float(BARNES_TAYLOR_RADIUS / max(1, abs(w))),
    )
    return (
        w / 2 * mp.log(2 * mp.pi) - w * (w + 1) / 2 + w * mp.loggamma(1 + w) - integral
    )


def zeta_prime_at_minus_one(precision: int | None = None) -> mpf:
    """
    ζ'(-1) ≈ -0.1654211437.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits + 16):
        res = mp.zeta(-1, 1, 1)
    with mp.workprec(bits):
        return +mp.re(res)


def widom_constant(precision: int | None = None) -> mpf:
    """
    (1/12) ln 2 + 3ζ'(-1) ≈ -0.4385011, the constant term of both the arc-determinant
      (one-arc) expansion and the sine-kernel large-gap expansion.
    """
    bits = resolve_precision(precision)
    zp = zeta_prime_at_minus_one(bits + 16)
    with mp.workprec(bits + 16):
        res = mp.log(2) / 12 + 3 * zp
    with mp.workprec(bits):
        return +res
