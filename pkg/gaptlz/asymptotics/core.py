import logging
from typing import Any

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from ..errors import DomainError, SymmetryViolation
from ..lib.expr import to_mpf
from ..lib.types import Scalar
from ..numerics.precision import resolve_precision
from ..numerics.quadrature import panel_integrate
from ..numerics.special import ln_barnes_g, widom_constant
from ..symbol import TrigPolynomial

logger = logging.getLogger(__name__)

DEFAULT_K_MAX = 32
# Coefficient ratios at or above this are treated as "no geometric decay seen"
MAX_DECAY_RATIO = mpf("0.95")


class ExpansionValue(BaseModel):
    """
    An asymptotic expansion evaluated without its o(1) term.

    `value` is the sum of `terms` (in insertion order); `truncation_bound` bounds the
      neglected tail of any infinite series among the terms.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: Any
    terms: dict[str, Any]
    truncation_bound: Any = mpf(0)
    precision_bits: int

    @classmethod
    def of(cls, terms: dict[str, Any], bits: int, truncation_bound: Any = 0) -> "ExpansionValue":
        return cls(
            value=_real_if_exact(mp.fsum(terms.values())),
            terms=terms,
            truncation_bound=mpf(truncation_bound),
            precision_bits=bits,
        )


def _real_if_exact(v: Any) -> Any:
    if isinstance(v, mpc) and v.imag == 0:
        return v.real
    return v


def x_critical(theta0: Scalar, precision: int | None = None) -> mpf:
    """x_c = -2 ln tan(θ0/4), the decay rate of s below which the one-arc behaviour persists."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0 = to_mpf(theta0)
        if not 0 < theta0 < mp.pi:
            raise DomainError(f"theta0 must lie in (0, π), got {mp.nstr(theta0, 10)}")
        return -2 * mp.log(mp.tan(theta0 / 4))


def critical_s(theta0: Scalar, n: int, precision: int | None = None) -> mpf:
    """e^{-x_c n} = tan(θ0/4)^{2n}"""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        return mp.exp(-n * x_critical(theta0, bits))


def mapped_w_coeffs(
    theta0: Scalar, w: TrigPolynomial, k_max: int, precision: int | None = None
) -> list[Any]:
    """
    W̃_k for 0 <= k <= k_max, with W̃(e^{iθ}) = W(e^{2i arcsin(sin(θ0/2) sin(θ/2))}).

    For W real with W_{-k} = W_k the function W̃ is real, even and analytic on the circle, so
      W̃_{-k} = W̃_k and the coefficients decay geometrically.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        sin_half = mp.sin(to_mpf(theta0) / 2)
        if w.is_zero():
            return [mpf(0)] * (k_max + 1)

        def integrand(theta: Any) -> list[Any]:
            phase = 2 * mp.asin(sin_half * mp.sin(theta / 2))
            value = mp.re(w.on_circle(phase))
            return [value * mp.cos(k * theta) for k in range(k_max + 1)]

        width = min(mpf("0.5"), mpf(4) / (k_max + 1))
        # Even integrand: (1/2π) ∫_{-π}^{π} = (1/π) ∫_0^π
        res = panel_integrate(integrand, [mpf(0), +mp.pi], precision=bits, max_width=width)
        return [v / mp.pi for v in res]


def geometric_tail_bound(coeffs: list[Any], floor: Any = 0) -> mpf:
    """
    Bound for Σ_{k > K} k c_k^2 from the last coefficients c_0..c_K, assuming
      |c_{K+j}| <= |c_K| q^j with q the largest ratio among the last three.

    Coefficients at or below `floor` count as zero; a tail that has reached it gives 0.
    """
    if len(coeffs) < 4:
        return mp.inf
    tail = [abs(c) if abs(c) > floor else mpf(0) for c in coeffs[-4:]]
    if tail[-1] == 0:
        return mpf(0)
    ratios = [b / a if a else mp.inf for a, b in zip(tail, tail[1:])]
    q = max(ratios)
    if q >= MAX_DECAY_RATIO:
        return mp.inf
    k = len(coeffs) - 1
    q2 = q * q
    return tail[-1] ** 2 * (k * q2 / (1 - q2) + q2 / (1 - q2) ** 2)


def widom_expansion(
    theta0: Scalar,
    w: TrigPolynomial,
    n: int,
    k_max: int = DEFAULT_K_MAX,
    precision: int | None = None,
) -> ExpansionValue:
    """
    n² ln sin(θ0/2) + n W̃_0 - ¼ ln n + Σ_{k>=1} k W̃_k W̃_{-k} - ¼ ln cos(θ0/2) + (1/12) ln 2
      + 3ζ'(-1): ln D_n for the arc-supported symbol (s = 0) without the o(1) term.
    """
    if not w.is_symmetric_real():
        raise SymmetryViolation("The one-arc expansion needs W real with W_{-k} = W_k")
    if k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")
    bits = resolve_precision(precision)
    w_tilde = mapped_w_coeffs(theta0, w, k_max, bits)
    with mp.workprec(bits):
        theta0 = to_mpf(theta0)
        terms = {
            "leading": n * n * mp.log(mp.sin(theta0 / 2)),
            "linear": n * w_tilde[0],
            "log": -mp.log(n) / 4,
            "series": mp.fsum(k * w_tilde[k] ** 2 for k in range(1, k_max + 1)),
            "endpoint": -mp.log(mp.cos(theta0 / 2)) / 4,
            "constant": widom_constant(bits),
        }
        # W̃ is a trigonometric polynomial of the same degree as W
        if k_max >= w.degree:
            bound = mpf(0)
        else:
            bound = geometric_tail_bound(w_tilde, max(map(abs, w_tilde)) * mpf(2) ** (16 - bits))
        return ExpansionValue.of(terms, bits, bound)


def large_y_expansion(y: Scalar, n: int, precision: int | None = None) -> ExpansionValue:
    """
    The W = 0 one-arc expansion on the shrinking gap θ0 = π(1 - 2y/n):
      n² ln cos(πy/n) - ¼ ln n - ¼ ln sin(πy/n) + c.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        t = mp.pi * to_mpf(y) / n
        if not 0 < t < mp.pi / 2:
            raise DomainError(f"Need 0 < y < n/2, got y={y!r}, n={n}")
        terms = {
            "leading": n * n * mp.log(mp.cos(t)),
            "log": -mp.log(n) / 4,
            "endpoint": -mp.log(mp.sin(t)) / 4,
            "constant": widom_constant(bits),
        }
        return ExpansionValue.of(terms, bits)


def _szego_series(w: TrigPolynomial) -> Any:
    return mp.fsum(k * w.coefficient(k) * w.coefficient(-k) for k in range(1, w.degree + 1))


def szego_expansion(w: TrigPolynomial, n: int, precision: int | None = None) -> ExpansionValue:
    """n W_0 + Σ_{k>=1} k W_k W_{-k}, exact for a trigonometric polynomial W."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        terms = {"linear": n * w.coefficient(0), "series": _szego_series(w)}
        terms = {k: _real_if_exact(v) for k, v in terms.items()}
        return ExpansionValue.of(terms, bits)


def fisher_hartwig_expansion(
    s: Scalar, theta0: Scalar, w: TrigPolynomial, n: int, precision: int | None = None
) -> ExpansionValue:
    """
    ln D_n for fixed s in (0, 1) (two jumps with β = ∓ ln s/(2πi)) without the o(1) term:
      n W_0 + (ln s)²/(2π²) ln n + (ln s)²/(2π²) ln(2 sin θ0)
      + (ln s/π) Σ (W_k + W_{-k}) sin kθ0 + Σ k W_k W_{-k} + 2 ln(G(1 + β) G(1 - β)).

    s = 1 reduces to the Szegő expansion.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        s, theta0 = to_mpf(s), to_mpf(theta0)
        if not 0 < s <= 1:
            raise DomainError(f"s must lie in (0, 1], got {mp.nstr(s, 10)}")
        ln_s = mp.log(s)
        beta = ln_s / (2 * mp.pi * mpc(0, 1))
        cross = mp.fsum(
            (w.coefficient(k) + w.coefficient(-k)) * mp.sin(k * theta0)
            for k in range(1, w.degree + 1)
        )
        barnes = 2 * (ln_barnes_g(1 + beta, bits) + ln_barnes_g(1 - beta, bits))
        terms = {
            "linear": n * w.coefficient(0),
            "log": ln_s**2 / (2 * mp.pi**2) * mp.log(n),
            "jump_interaction": ln_s**2 / (2 * mp.pi**2) * mp.log(2 * mp.sin(theta0)),
            "cross": ln_s / mp.pi * cross,
            "series": _szego_series(w),
            # G(1 + β) G(1 - β) is real for real s: the two factors are conjugate
            "barnes": mp.re(barnes),
        }
        terms = {k: _real_if_exact(v) for k, v in terms.items()}
        return ExpansionValue.of(terms, bits)


def theorem_error_envelope(
    n: int, theta0: Scalar, s: Scalar, weighted: bool = False, precision: int | None = None
) -> mpf:
    """
    n^{-1/2} e^{x_c n} s (times (π - θ0)^{1/2} when `weighted`), with unit constant.
    Only meaningful for 0 <= s <= e^{-x_c n}.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        s = to_mpf(s)
        s_c = critical_s(theta0, n, bits)
        if s < 0 or s > s_c * (1 + mpf(2) ** (-bits // 2)):
            raise DomainError(
                f"s={mp.nstr(s, 10)} is outside [0, e^(-x_c n)] = [0, {mp.nstr(s_c, 10)}]"
            )
        envelope = s / (s_c * mp.sqrt(n))
        if weighted:
            envelope *= mp.sqrt(mp.pi - to_mpf(theta0))
        return envelope
