"""
The Bessel model problem used near z0: Ψ jumps by [[0, 1], [-1, 0]] on ℝ⁻ and by
[[1, 0], [1, 1]] on the rays arg ζ = ±2π/3 (all oriented towards 0), and its modification
Ψ̂ = (I + A)Ψ which also jumps by [[1, e^{-nx}], [0, 1]] on ℝ⁺ (oriented away from 0).

Sectors are numbered 0 for |arg ζ| < 2π/3, 1 for 2π/3 < arg ζ < π and -1 for
-π < arg ζ < -2π/3. A sector may be forced to evaluate its formula on the boundary.
"""

import logging
from typing import Any

from mpmath import mp, mpc, mpf

from ..errors import OnContour
from ..lib.expr import is_inf, to_mp, to_mpf
from ..lib.matrix import Matrix2C
from ..lib.types import BesselKind, Scalar
from ..numerics.precision import resolve_precision, tolerance
from ..numerics.special import bessel0

logger = logging.getLogger(__name__)

RAY_ANGLE = 2 * mp.pi / 3


def psi_sector(zeta: Any, bits: int) -> int:
    """The sector containing ζ; `OnContour` on ℝ⁻, the two rays and at 0."""
    if zeta == 0:
        raise OnContour("ζ = 0 is the common endpoint of the contours")
    a = mp.arg(zeta)
    tol = tolerance(bits, 0.9)
    if abs(abs(a) - RAY_ANGLE) <= tol or mp.pi - abs(a) <= tol:
        raise OnContour(f"ζ={mp.nstr(zeta, 10)} lies on a contour of Ψ; use one-sided offsets")
    if abs(a) < RAY_ANGLE:
        return 0
    return 1 if a > 0 else -1


def _branches(zeta: Any, sector: int) -> tuple[Any, Any]:
    """ζ^{1/2} and log ζ, continued from the given sector onto its boundary."""
    root, log = mp.sqrt(zeta), mp.log(zeta)
    if sector == -1 and mp.im(zeta) == 0 and mp.re(zeta) < 0:
        root, log = -root, mp.conj(log)
    return root, log


def _psi(zeta: Any, root: Any, sector: int, bits: int) -> Matrix2C:
    if sector == 0:
        x = 2 * root
        return Matrix2C(
            bessel0(BesselKind.I, x, bits),
            mpc(0, 1) / mp.pi * bessel0(BesselKind.K, x, bits),
            2 * mp.pi * mpc(0, 1) * root * bessel0(BesselKind.I_PRIME, x, bits),
            -2 * root * bessel0(BesselKind.K_PRIME, x, bits),
        )
    x = 2 * mp.sqrt(-zeta)
    h1, h2 = bessel0(BesselKind.H1, x, bits), bessel0(BesselKind.H2, x, bits)
    d1, d2 = bessel0(BesselKind.H1_PRIME, x, bits), bessel0(BesselKind.H2_PRIME, x, bits)
    if sector == 1:
        return Matrix2C(h1 / 2, h2 / 2, mp.pi * root * d1, mp.pi * root * d2)
    return Matrix2C(h2 / 2, -h1 / 2, -mp.pi * root * d2, mp.pi * root * d1)


def bessel_model_psi(
    zeta: Scalar, precision: int | None = None, sector: int | None = None
) -> Matrix2C:
    """
    Ψ(ζ), sector by sector:

        |arg ζ| < 2π/3:         [[I0(2ζ^½), (i/π) K0(2ζ^½)],
                                 [2πi ζ^½ I0'(2ζ^½), -2ζ^½ K0'(2ζ^½)]]
        2π/3 < arg ζ < π:       [[H0¹(2(-ζ)^½)/2, H0²(2(-ζ)^½)/2],
                                 [πζ^½ H0¹'(2(-ζ)^½), πζ^½ H0²'(2(-ζ)^½)]]
        -π < arg ζ < -2π/3:     [[H0²(2(-ζ)^½)/2, -H0¹(2(-ζ)^½)/2],
                                 [-πζ^½ H0²'(2(-ζ)^½), πζ^½ H0¹'(2(-ζ)^½)]]

    det Ψ = 1 and Ψ(ζ) ~ (2πζ^½)^{-σ3/2} (1/√2)[[1, i], [i, 1]] e^{2ζ^½σ3} as ζ -> ∞.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        zeta = mpc(to_mp(zeta))
        k = psi_sector(zeta, bits) if sector is None else sector
        root, _ = _branches(zeta, k)
        return _psi(zeta, root, k, bits)


def _f_matrix(zeta: Any, k: int, bits: int) -> tuple[Matrix2C, Matrix2C]:
    root, log = _branches(zeta, k)
    psi = _psi(zeta, root, k, bits)
    f = psi
    if k != 0:
        f = f @ Matrix2C.lower(k)
    return psi, f @ Matrix2C.upper(-log / (2 * mp.pi * mpc(0, 1)))


def f_matrix(zeta: Scalar, precision: int | None = None, sector: int | None = None) -> Matrix2C:
    """
    F(ζ) = Ψ(ζ) [[1, -(1/2πi) log ζ], [0, 1]] in sector 0, with Ψ first multiplied by
      [[1, 0], [±1, 1]] in sectors ±1. F is entire.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        zeta = mpc(to_mp(zeta))
        k = psi_sector(zeta, bits) if sector is None else sector
        return _f_matrix(zeta, k, bits)[1]


def psi_hat(
    zeta: Scalar, nx: Scalar, precision: int | None = None, sector: int | None = None
) -> Matrix2C:
    """
    Ψ̂(ζ) = (I + A(ζ)) Ψ(ζ) with A(ζ) = e^{-nx} F(ζ) [[0, -(1/2πi) log(-ζ)], [0, 0]] F(ζ)^{-1}.

    A is nilpotent, so det Ψ̂ = 1; it is O(e^{-nx}) and vanishes for nx = ∞.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        zeta = mpc(to_mp(zeta))
        nx = mp.inf if is_inf(nx) else to_mpf(nx)
        if nx < 0:
            raise ValueError(f"nx must be non-negative, got {mp.nstr(nx, 10)}")
        k = psi_sector(zeta, bits) if sector is None else sector
        if nx != mp.inf and mp.im(zeta) == 0 and mp.re(zeta) > 0:
            raise OnContour(f"ζ={mp.nstr(zeta, 10)} lies on ℝ⁺, a contour of Ψ̂")
        psi, f = _f_matrix(zeta, k, bits)
        if nx == mp.inf:
            return psi
        nilpotent = Matrix2C.of(((0, -mp.log(-zeta) / (2 * mp.pi * mpc(0, 1))), (0, 0)))
        a = f @ nilpotent @ f.inv() * mp.exp(-nx)
        return psi + a @ psi


def psi_asymptotic_error(zeta: Scalar, precision: int | None = None) -> mpf:
    """
    ‖M(ζ)^{-1} Ψ(ζ) e^{-2ζ^½σ3} - I‖ with M(ζ) = (2πζ^½)^{-σ3/2} (1/√2)[[1, i], [i, 1]]:
      the O(ζ^{-1/2}) correction in the large-ζ behaviour of Ψ.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        zeta = mpc(to_mp(zeta))
        root = mp.sqrt(zeta)
        lead = Matrix2C.sigma3_power(mp.sqrt(2 * mp.pi * root)).inv() @ (
            Matrix2C.of(((1, mpc(0, 1)), (mpc(0, 1), 1))) * (1 / mp.sqrt(2))
        )
        psi = bessel_model_psi(zeta, bits)
        return (lead.inv() @ psi @ Matrix2C.exp_sigma3(-2 * root) - Matrix2C.identity()).norm()
