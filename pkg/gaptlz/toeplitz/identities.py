"""
Three independent evaluations of ∂_s ln D_n for the family a = 1, b = s.

`ds_log_det` (in `core`) is the exact trace formula and serves as the oracle for the others.
"""

import logging
import math
from collections.abc import Callable
from typing import Any

from mpmath import mp, mpf

from ..errors import DomainError
from ..numerics.precision import resolve_precision
from ..symbol import SymbolSpec, integrate_against_symbol
from .core import polyder, polyval, recursion, reversed_poly
from .opuc import opuc, y_matrix

logger = logging.getLogger(__name__)

# Default finite-difference step, relative to the distance of s from {0, 1}
FD_RELATIVE_STEP = mpf(10) ** -12
FD_GUARD_BITS = 32


def diff_identity_general(spec: SymbolSpec, n: int, precision: int | None = None) -> Any:
    """
    (1/2π) ∫_gap z^{1-n} [Y^{-1} Y']_21 e^{W(z)} dθ with z = e^{iθ}, using
      [Y^{-1} Y']_21 = Y_11 Y_21' - Y_21 Y_11' (det Y = 1) and the polynomial column of Y.

    Valid for any W; needs D_{n-1}, D_n, D_{n+1} != 0.
    """
    if not spec.is_s_family():
        raise DomainError("The differential identity is for a = 1 with the gap value given as s")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bits = resolve_precision(precision)
    rec = recursion(spec, n, bits)
    with mp.workprec(bits):
        p = rec.p
        q_star = reversed_poly(rec.q_prev)
        dp, dq_star = polyder(p), polyder(q_star)
        h_nm1 = rec.h[n - 1]

        def g(theta: Any) -> Any:
            z = mp.expj(theta)
            y11, y21 = polyval(p, z), -polyval(q_star, z) / h_nm1
            dy11, dy21 = polyval(dp, z), -polyval(dq_star, z) / h_nm1
            return mp.power(z, 1 - n) * (y11 * dy21 - y21 * dy11)

        return integrate_against_symbol(spec, g, bits, ds=True)


def _check_w0(spec: SymbolSpec) -> mpf:
    if not spec.w.is_zero():
        raise DomainError("This form of the differential identity needs W = 0")
    if not spec.is_s_family():
        raise DomainError("The differential identity is for a = 1 with the gap value given as s")
    s = spec.gap_value()
    if mp.im(s) != 0 or not 0 < s < 1:
        raise DomainError(f"s must lie strictly inside (0, 1), got {mp.nstr(s, 10)}")
    return mp.re(s)


def _fd_setup(spec: SymbolSpec, fd_step: Any, bits: int) -> tuple[mpf, mpf, int]:
    with mp.workprec(bits):
        s = _check_w0(spec)
        h = FD_RELATIVE_STEP * min(s, 1 - s) if fd_step is None else mpf(fd_step)
        if not 0 < h < min(s, 1 - s):
            raise ValueError(f"fd_step must lie in (0, min(s, 1 - s)), got {fd_step!r}")
    # The difference quotient loses about log2(1/h) bits, the second order term as many again
    work = bits + 2 * math.ceil(-math.log2(float(h))) + FD_GUARD_BITS
    logger.debug(f"finite differences with step {mp.nstr(h, 5)} at {work} bits")
    return s, h, work


def _centered(fn: Callable[[SymbolSpec], Any], spec: SymbolSpec, s: mpf, h: mpf) -> Any:
    return (fn(spec.with_s(s + h)) - fn(spec.with_s(s - h))) / (2 * h)


def diff_identity_w0(
    spec: SymbolSpec, n: int, fd_step: Any = None, precision: int | None = None
) -> Any:
    """
    -2n ∂_s χ_n / χ_n + (2(1 - s)/π) Im( conj(φ_n(z0)) ∂_s φ_n(z0) ), z0 = e^{iθ0}, for W = 0
      and s in (0, 1). The s-derivatives are centered differences of `opuc` with step
      `fd_step` (default 1e-12 · min(s, 1 - s)), taken at raised precision.
    """
    bits = resolve_precision(precision)
    s, h, work = _fd_setup(spec, fd_step, bits)
    with mp.workprec(work):
        z0 = mp.expj(spec.theta0_value())
        d_chi = _centered(lambda sp: opuc(sp, n, work).chi_n, spec, s, h)
        d_phi = _centered(lambda sp: opuc(sp, n, work).phi_n(z0), spec, s, h)
        data = opuc(spec, n, work)
        value = -2 * n * d_chi / data.chi_n + 2 * (1 - s) / mp.pi * mp.im(
            mp.conj(data.phi_n(z0)) * d_phi
        )
    with mp.workprec(bits):
        return +mp.re(value)


def diff_identity_y_form(
    spec: SymbolSpec, n: int, fd_step: Any = None, precision: int | None = None
) -> Any:
    """
    n ∂_s ln Y_12(0) + (2(1 - s)/π) Im( conj(u) ∂_s u ), u = Y_11(z0)/√Y_12(0), for W = 0.

    Y_12(0) comes from the Cauchy transform in `y_matrix`, not from the recursion, so this
      is a check on Y as well as on the identity.
    """
    bits = resolve_precision(precision)
    s, h, work = _fd_setup(spec, fd_step, bits)
    with mp.workprec(work):
        z0 = mp.expj(spec.theta0_value())

        def y12_at_0(sp: SymbolSpec) -> Any:
            return y_matrix(sp, n, 0, work).a12

        def u(sp: SymbolSpec) -> Any:
            return opuc(sp, n, work).y11_at_z0 / mp.sqrt(y12_at_0(sp))

        d_log_y12 = _centered(lambda sp: mp.log(y12_at_0(sp)), spec, s, h)
        d_u = _centered(u, spec, s, h)
        value = n * d_log_y12 + 2 * (1 - s) / mp.pi * mp.im(mp.conj(u(spec)) * d_u)
    with mp.workprec(bits):
        return +mp.re(value)
