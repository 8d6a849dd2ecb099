import logging
from typing import Any, Literal

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from ..errors import DomainError, JumpPointError, OnContour
from ..lib.matrix import Matrix2C
from ..lib.types import Side
from ..numerics.precision import resolve_precision, tolerance
from ..numerics.quadrature import graded_breaks, panel_integrate
from ..symbol import (
    SymbolSpec,
    fourier_coeffs,
    integrate_against_symbol,
    symbol_eval,
    symbol_pieces,
)
from .core import Recursion, polyder, polyval, recursion, reversed_poly

logger = logging.getLogger(__name__)

# Inside this annulus the Cauchy transforms subtract the density at z/|z|
NEAR_CIRCLE = (mpf(1) / 2, mpf(2))


class OPUCData(BaseModel):
    """
    The orthonormal polynomials of degrees n - 1 and n, their leading coefficients, and the
      two entries of Y used by the differential identities.

    φ_k = χ_k P_k and φ̂_k = χ_k Q_k with (1/2π) ∫ φ_k(z) φ̂_m(1/z) f dθ = δ_km on z = e^{iθ}.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    chi_nm1: Any
    chi_n: Any
    phi_n_coeffs: tuple[Any, ...]
    hat_phi_n_coeffs: tuple[Any, ...]
    phi_nm1_coeffs: tuple[Any, ...]
    hat_phi_nm1_coeffs: tuple[Any, ...]
    y12_at_0: Any
    y11_at_z0: Any
    precision_bits: int

    def phi_n(self, z: Any) -> Any:
        return polyval(self.phi_n_coeffs, z)

    def hat_phi_nm1(self, z: Any) -> Any:
        return polyval(self.hat_phi_nm1_coeffs, z)

    def monic_p_n(self) -> list[Any]:
        return [c / self.chi_n for c in self.phi_n_coeffs]


def _opuc_from(rec: Recursion, n: int, spec: SymbolSpec, bits: int) -> OPUCData:
    with mp.workprec(bits):
        chi_n, chi_nm1 = rec.chi(n), rec.chi(n - 1)
        z0 = mp.expj(spec.theta0_value())
        return OPUCData(
            n=n,
            chi_nm1=chi_nm1,
            chi_n=chi_n,
            phi_n_coeffs=tuple(chi_n * c for c in rec.p),
            hat_phi_n_coeffs=tuple(chi_n * c for c in rec.q),
            phi_nm1_coeffs=tuple(chi_nm1 * c for c in rec.p_prev),
            hat_phi_nm1_coeffs=tuple(chi_nm1 * c for c in rec.q_prev),
            y12_at_0=rec.h[n],
            y11_at_z0=polyval(rec.p, z0),
            precision_bits=bits,
        )


def opuc(spec: SymbolSpec, n: int, precision: int | None = None) -> OPUCData:
    """
    φ_n, φ̂_{n-1} and χ_{n-1}, χ_n for the symbol of `spec`. Needs D_1..D_{n+1} != 0.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bits = resolve_precision(precision)
    return _opuc_from(recursion(spec, n, bits), n, spec, bits)


def orthonormality_residual(
    spec: SymbolSpec,
    n: int,
    precision: int | None = None,
    method: Literal["quadrature", "moments"] = "quadrature",
) -> Any:
    """
    max over k, m in {n - 1, n} of |(1/2π) ∫ φ_k(z) φ̂_m(1/z) f dθ - δ_km|.

    `quadrature` integrates against the symbol itself, `moments` sums against the Fourier
      coefficients, so the first is independent of how f_k were obtained.
    """
    bits = resolve_precision(precision)
    data = opuc(spec, n, bits)
    pairs = [
        (data.phi_nm1_coeffs, data.hat_phi_nm1_coeffs, 1),
        (data.phi_nm1_coeffs, data.hat_phi_n_coeffs, 0),
        (data.phi_n_coeffs, data.hat_phi_nm1_coeffs, 0),
        (data.phi_n_coeffs, data.hat_phi_n_coeffs, 1),
    ]
    with mp.workprec(bits):
        if method == "moments":
            f = fourier_coeffs(spec, n, bits)
            values = [
                mp.fsum(pj * ql * f[l - j] for j, pj in enumerate(p) for l, ql in enumerate(q))
                for p, q, _ in pairs
            ]
        else:

            def g(theta: Any) -> list[Any]:
                z = mp.expj(theta)
                return [polyval(p, z) * polyval(q, 1 / z) for p, q, _ in pairs]

            values = integrate_against_symbol(spec, g, bits)
        return max(abs(v - delta) for v, (_, _, delta) in zip(values, pairs))


def _cauchy_pair(
    spec: SymbolSpec, densities: Any, z: Any, bits: int, side: Side | None
) -> list[Any]:
    """
    C[g_i f](z) = (1/2π) ∫ g_i(w) f(w) w/(w - z) dθ, w = e^{iθ}, for the polynomial-type
      densities returned as a list by `densities(w)`.

    Close to the circle the density value at z/|z| is subtracted and its contribution
      (1 inside, 0 outside) added back, so the boundary values on the circle are exact.
    """
    r = abs(z)
    on_circle = abs(r - 1) <= tolerance(bits, 0.9)
    if on_circle and side is None:
        raise OnContour(f"z={mp.nstr(z, 10)} lies on the unit circle; give a side")
    if not NEAR_CIRCLE[0] < r < NEAR_CIRCLE[1]:

        def g(theta: Any) -> list[Any]:
            w = mp.expj(theta)
            k = w / (w - z)
            return [d * k for d in densities(w)]

        return integrate_against_symbol(spec, g, bits)

    arg = mp.arg(z)
    z_star = mp.expj(arg)
    try:
        f_star = symbol_eval(spec, arg, bits)
    except JumpPointError:
        if on_circle:
            raise
        # Off the circle above a jump: nothing smooth to subtract
        f_star = mpf(0)
    ref = [d * f_star for d in densities(z_star)]
    inside = (on_circle and side == Side.PLUS) or (not on_circle and r < 1)
    breaks = tuple(graded_breaks(arg, 0 if on_circle else abs(r - 1)))
    total = [mpc(0)] * len(ref)
    # Pieces where f = 0 still carry -ref
    for piece in symbol_pieces(spec, breaks, keep_zero=True):

        def h(theta: Any, piece: Any = piece) -> list[Any]:
            w = mp.expj(theta)
            k = w / (w - z)
            wt = piece.weight(theta)
            return [(d * wt - c) * k for d, c in zip(densities(w), ref)]

        res = panel_integrate(h, piece.edges, precision=bits)
        total = [t + v for t, v in zip(total, res)]
    return [t / (2 * mp.pi) + (c if inside else 0) for t, c in zip(total, ref)]


def y_matrix(
    spec: SymbolSpec,
    n: int,
    z: Any,
    precision: int | None = None,
    side: Side | None = None,
) -> Matrix2C:
    """
    Y(z) = [[P_n(z), C[P_n f w^{-n}](z)],
            [-Q*_{n-1}(z)/h_{n-1}, -C[Q*_{n-1} f w^{-n}](z)/h_{n-1}]]
      with monic P_n, so Y(z) ~ z^{nσ3} at infinity and Y_+ = Y_- [[1, z^{-n}f], [0, 1]]
      on the circle (+ is the inside).

    On the circle `side` picks the boundary value; without it `OnContour` is raised.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bits = resolve_precision(precision)
    rec = recursion(spec, n, bits)
    with mp.workprec(bits):
        z = mpc(z)
        p_n = rec.p
        q_star = reversed_poly(rec.q_prev)
        h_nm1 = rec.h[n - 1]

        def densities(w: Any) -> list[Any]:
            w_n = mp.power(w, -n)
            return [polyval(p_n, w) * w_n, polyval(q_star, w) * w_n]

        c_p, c_q = _cauchy_pair(spec, densities, z, bits, side)
        y21 = -polyval(q_star, z) / h_nm1
        return Matrix2C(polyval(p_n, z), c_p, y21, -c_q / h_nm1)


def cd_residual(spec: SymbolSpec, n: int, z: Any, precision: int | None = None) -> Any:
    """
    |LHS - RHS| of the Christoffel-Darboux formula for W = 0,
      Σ_{j<n} φ_j(z) φ_j(1/z) = -n φ_n(z) φ_n(1/z) + z (φ_n(1/z) φ_n'(z) + z^{-2} φ_n'(1/z) φ_n(z)),
      with the left side summed term by term.
    """
    if not spec.w.is_zero() or not spec.is_hermitian():
        raise DomainError("Christoffel-Darboux check needs W = 0 and a real symbol")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bits = resolve_precision(precision)
    rec = recursion(spec, n, bits, keep_history=True)
    with mp.workprec(bits):
        z = mpc(z)
        zi = 1 / z
        lhs = mpc(0)
        for k in range(n):
            chi2 = 1 / rec.h[k]
            p_k = rec.history[k][0]
            lhs += chi2 * polyval(p_k, z) * polyval(p_k, zi)
        phi = [rec.chi(n) * c for c in rec.p]
        dphi = polyder(phi)
        rhs = -n * polyval(phi, z) * polyval(phi, zi) + z * (
            polyval(phi, zi) * polyval(dphi, z) + zi * zi * polyval(dphi, zi) * polyval(phi, z)
        )
        return abs(lhs - rhs)
