import logging
from typing import Any, Literal

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from ..errors import SingularMinor
from ..numerics.precision import VALIDATION_EXTRA_BITS, auto_precision, resolve_precision
from ..symbol import SymbolSpec, ds_fourier_coeffs, fourier_coeffs

logger = logging.getLogger(__name__)

# Agreement required between the two precisions of a validated log-determinant
VALIDATION_TOL = mpf(10) ** -12
# A pivot below 2^-(bits - SINGULAR_MARGIN_BITS) times the largest moment counts as zero
SINGULAR_MARGIN_BITS = 8


class LogDetResult(BaseModel):
    """
    ln D_n with the logs of the successive pivots.

    For the recursion the pivots are D_{k+1}/D_k = χ_k^{-2}; for dense LU they are the
      diagonal of U, with the permutation sign folded into the last entry. In both cases
      the pivot logs sum to `ln_d`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    ln_d: Any
    pivot_logs: tuple[Any, ...]
    precision_bits: int
    validated: bool = False
    method: Literal["recursion", "lu"] = "recursion"


class Recursion(BaseModel):
    """
    Monic polynomials P_k, Q_k biorthogonal with respect to f:
      (1/2π) ∫ P_k(e^{iθ}) Q_m(e^{-iθ}) f(e^{iθ}) dθ = h_k δ_{km},
      built by P_{k+1} = z P_k - a_k Q_k^*, Q_{k+1} = z Q_k - b_k P_k^* with
      Q^*(z) = z^k Q(1/z). Coefficients are stored from the constant term up.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    degree: int
    p: tuple[Any, ...]
    q: tuple[Any, ...]
    p_prev: tuple[Any, ...] = ()
    q_prev: tuple[Any, ...] = ()
    h: tuple[Any, ...]
    history: tuple[tuple[tuple[Any, ...], tuple[Any, ...]], ...] = ()
    precision_bits: int

    def chi(self, k: int) -> Any:
        """χ_k = (D_k / D_{k+1})^{1/2}, principal branch."""
        return 1 / mp.sqrt(self.h[k])


def polyval(coeffs: tuple[Any, ...] | list[Any], z: Any) -> Any:
    """Horner evaluation, coefficients from the constant term up."""
    acc: Any = mpf(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def polyder(coeffs: tuple[Any, ...] | list[Any]) -> list[Any]:
    return [k * c for k, c in enumerate(coeffs)][1:]


def reversed_poly(coeffs: tuple[Any, ...] | list[Any]) -> list[Any]:
    """Q^*(z) = z^k Q(1/z) for Q of degree k."""
    return list(reversed(coeffs))


def _check_pivot(h: Any, k: int, scale: Any, bits: int) -> None:
    if abs(h) <= scale * mpf(2) ** -(bits - SINGULAR_MARGIN_BITS):
        raise SingularMinor(k + 1)


def recursion(
    spec: SymbolSpec, degree: int, precision: int | None = None, keep_history: bool = False
) -> Recursion:
    """
    Runs the recursion up to P_degree, Q_degree and h_0..h_degree.

    Raises SingularMinor(k + 1) when h_k = D_{k+1}/D_k vanishes to working precision for
      some k <= degree.
    """
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")
    bits = resolve_precision(precision)
    f = fourier_coeffs(spec, degree, bits)
    with mp.workprec(bits):
        scale = max(abs(v) for v in f.values)
        p: list[Any] = [mpc(1)]
        q: list[Any] = [mpc(1)]
        p_prev: list[Any] = []
        q_prev: list[Any] = []
        h = [+f[0]]
        _check_pivot(h[0], 0, scale, bits)
        history = [(tuple(p), tuple(q))] if keep_history else []
        for k in range(degree):
            e = mp.fsum(p[j] * f[-j - 1] for j in range(k + 1))
            e_hat = mp.fsum(q[j] * f[j + 1] for j in range(k + 1))
            a, b = e / h[k], e_hat / h[k]
            p_prev, q_prev = p, q
            # Coefficient j of z P_k - a Q_k^* is p_{j-1} - a q_{k-j}
            p = (
                [-a * q_prev[k]]
                + [p_prev[j - 1] - a * q_prev[k - j] for j in range(1, k + 1)]
                + [p_prev[k]]
            )
            q = (
                [-b * p_prev[k]]
                + [q_prev[j - 1] - b * p_prev[k - j] for j in range(1, k + 1)]
                + [q_prev[k]]
            )
            h.append(h[k] * (1 - a * b))
            _check_pivot(h[k + 1], k + 1, scale, bits)
            if keep_history:
                history.append((tuple(p), tuple(q)))
        return Recursion(
            degree=degree,
            p=tuple(p),
            q=tuple(q),
            p_prev=tuple(p_prev),
            q_prev=tuple(q_prev),
            h=tuple(h),
            history=tuple(history),
            precision_bits=bits,
        )


def moment_matrix(spec: SymbolSpec, n: int, precision: int | None = None) -> Any:
    """T_n = (f_{j-k})_{j,k=0..n-1} as an `mp.matrix`."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    bits = resolve_precision(precision)
    f = fourier_coeffs(spec, n - 1, bits)
    with mp.workprec(bits):
        return mp.matrix([[f[j - k] for k in range(n)] for j in range(n)])


def dense_log_det(spec: SymbolSpec, n: int, precision: int | None = None) -> LogDetResult:
    """
    ln D_n from LU with partial pivoting of the moment matrix, accumulating log-magnitudes
      and phases. Works for any symbol whose moment matrix is nonsingular.
    """
    bits = resolve_precision(precision)
    t = moment_matrix(spec, n, bits)
    with mp.workprec(bits):
        try:
            lu, perm = mp.LU_decomp(t)
        except ZeroDivisionError:
            raise SingularMinor(n, f"Moment matrix of size {n} is singular to working precision")
        logs = [mp.log(mpc(lu[j, j])) for j in range(n)]
        swaps = sum(1 for j, pj in enumerate(perm) if pj != j)
        if swaps % 2:
            logs[-1] += mpc(0, 1) * mp.pi
        return LogDetResult(
            n=n, ln_d=mp.fsum(logs), pivot_logs=tuple(logs), precision_bits=bits, method="lu"
        )


def _log_det_at(spec: SymbolSpec, n: int, bits: int) -> LogDetResult:
    if not spec.is_hermitian():
        return dense_log_det(spec, n, bits)
    rec = recursion(spec, n - 1, bits)
    with mp.workprec(bits):
        # Hermitian moment matrix: the pivots are real up to rounding
        logs = tuple(mp.log(mp.re(h)) for h in rec.h)
        return LogDetResult(n=n, ln_d=mp.fsum(logs), pivot_logs=logs, precision_bits=bits)


def log_det(
    spec: SymbolSpec, n: int, precision: int | None = None, validate: bool = True
) -> LogDetResult:
    """
    ln D_n for the Toeplitz matrix of `spec`.

    Hermitian symbols go through the recursion (the pivots are the ratios D_{k+1}/D_k),
      everything else through dense LU. Without an explicit precision the auto policy of
      `auto_precision(n, θ0)` applies. With `validate` the computation is repeated with 64
      more bits and `validated` records whether the two agree to 1e-12 relative.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    with mp.workprec(64):
        theta0 = spec.theta0_value()
    bits = resolve_precision(precision, fallback=auto_precision(n, theta0))
    logger.debug(f"log_det n={n} at {bits} bits")
    res = _log_det_at(spec, n, bits)
    if not validate:
        return res
    check = _log_det_at(spec, n, bits + VALIDATION_EXTRA_BITS)
    with mp.workprec(bits):
        diff = abs(res.ln_d - check.ln_d)
        validated = bool(diff <= VALIDATION_TOL * max(mpf(1), abs(check.ln_d)))
    if not validated:
        logger.warning(
            f"log_det n={n}: {bits} and {bits + VALIDATION_EXTRA_BITS} bits differ by "
            f"{mp.nstr(diff, 5)}"
        )
    return res.model_copy(update={"validated": validated})


def ds_log_det(spec: SymbolSpec, n: int, precision: int | None = None) -> Any:
    """
    ∂_s ln D_n = tr(T_n^{-1} ∂_s T_n), with ∂_s T_n built from ∂_s f_k. Needs the s-family.
      The default precision is `auto_precision(n, θ0)`, as for `log_det`.
    """
    with mp.workprec(64):
        theta0 = spec.theta0_value()
    bits = resolve_precision(precision, fallback=auto_precision(n, theta0))
    ds = ds_fourier_coeffs(spec, n - 1, bits)
    t = moment_matrix(spec, n, bits)
    with mp.workprec(bits):
        try:
            t_inv = mp.inverse(t)
        except ZeroDivisionError:
            raise SingularMinor(n, f"Moment matrix of size {n} is singular to working precision")
        return mp.fsum(t_inv[k, j] * ds[j - k] for j in range(n) for k in range(n))
