import logging
from typing import Any

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, model_validator

from ..asymptotics import ExpansionValue, x_critical
from ..errors import DomainError, NotConverged, SingularMinor
from ..lib.expr import to_mpf
from ..lib.types import Scalar
from ..numerics.precision import auto_precision, resolve_precision
from ..numerics.special import widom_constant
from ..symbol import SymbolSpec
from ..toeplitz import log_det

logger = logging.getLogger(__name__)

# Dense LU at high precision for every DFT node; larger n is refused
MAX_COUNT_N = 64
# Probabilities down to this are rounding noise and clamp to 0
CLAMP_FLOOR = mpf(10) ** -20
# The retry node set is ρ e^{iπ/(n+1)} ω^j
RETRY_RADIUS = mpf("0.75")


class CountDistribution(BaseModel):
    """
    Law of the number X of CUE(n) eigenvalues on the arc |θ| < θ0: `probs[k]` = P(X = k).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    theta0: Any
    probs: tuple[Any, ...]
    precision_bits: int

    @model_validator(mode="after")
    def _check_length(self) -> "CountDistribution":
        if len(self.probs) != self.n + 1:
            raise ValueError(f"Need {self.n + 1} probabilities for n={self.n}")
        return self

    def total(self) -> mpf:
        with mp.workprec(self.precision_bits):
            return mp.fsum(self.probs)

    def mean(self) -> mpf:
        with mp.workprec(self.precision_bits):
            return mp.fsum(k * p for k, p in enumerate(self.probs))

    def variance(self) -> mpf:
        with mp.workprec(self.precision_bits):
            mean = self.mean()
            return mp.fsum((k - mean) ** 2 * p for k, p in enumerate(self.probs))

    def tail(self, p: int) -> mpf:
        """P(X >= p)"""
        if not 0 <= p <= self.n:
            raise ValueError(f"p must lie in 0..{self.n}, got {p}")
        with mp.workprec(self.precision_bits):
            return mp.fsum(self.probs[p:])

    def mgf(self, lam: Scalar) -> mpf:
        """E[e^{λX}] from the distribution itself."""
        with mp.workprec(self.precision_bits):
            lam = to_mpf(lam)
            return mp.fsum(p * mp.exp(lam * k) for k, p in enumerate(self.probs))


def _check_theta0(theta0: Scalar) -> mpf:
    theta0 = to_mpf(theta0)
    if not 0 < theta0 < mp.pi:
        raise DomainError(f"theta0 must lie in (0, π), got {mp.nstr(theta0, 10)}")
    return theta0


def log_mgf(theta0: Scalar, n: int, lam: Scalar, precision: int | None = None) -> mpf:
    """
    ln E[e^{λX}] = nλ + ln D_n(s = e^{-λ}, θ0, W = 0).
    """
    with mp.workprec(64):
        bits = resolve_precision(precision, fallback=auto_precision(n, _check_theta0(theta0)))
    with mp.workprec(bits):
        lam = to_mpf(lam)
        if lam < 0:
            raise DomainError(f"λ must be nonnegative, got {mp.nstr(lam, 10)}")
        spec = SymbolSpec(theta0=theta0, s=mp.exp(-lam))
        res = log_det(spec, n, bits, validate=False)
        return n * lam + mp.re(res.ln_d)


def mgf(theta0: Scalar, n: int, lam: Scalar, precision: int | None = None) -> mpf:
    bits = resolve_precision(precision)
    value = log_mgf(theta0, n, lam, precision)
    with mp.workprec(bits):
        return mp.exp(value)


def _generating_values(spec: SymbolSpec, n: int, scale: Any, bits: int) -> list[Any]:
    """E[t^X] = D_n(a = t, b = 1) at t = scale·ω^j, j = 0..n."""
    values = []
    for j in range(n + 1):
        t = scale * mp.expj(2 * mp.pi * j / (n + 1))
        res = log_det(spec.with_values(a=t, b=1), n, bits, validate=False)
        values.append(mp.exp(res.ln_d))
    return values


def _invert(values: list[Any], n: int, scale: Any) -> list[Any]:
    """Coefficients of the degree-n polynomial with the given values at scale·ω^j."""
    coeffs = []
    for k in range(n + 1):
        s = mp.fsum(v * mp.expj(-2 * mp.pi * j * k / (n + 1)) for j, v in enumerate(values))
        coeffs.append(s / ((n + 1) * scale**k))
    return coeffs


def _clamp(p: Any, k: int) -> mpf:
    p = mp.re(p)
    if p < -CLAMP_FLOOR:
        raise NotConverged(f"P(X = {k}) came out as {mp.nstr(p, 5)}; raise the precision")
    return max(p, mpf(0))


def count_distribution(
    theta0: Scalar, n: int, precision: int | None = None
) -> CountDistribution:
    """
    Exact law of the eigenvalue count on the arc |θ| < θ0 for CUE(n).

    E[t^X] is the Toeplitz determinant with value t on the arc and 1 on the gap, a polynomial
      of degree n in t. It is evaluated at the (n+1)-st roots of unity and inverted by a
      discrete Fourier transform. If some node gives a singular moment matrix, the nodes are
      moved once to a rotated circle of radius 3/4.
    """
    if not 1 <= n <= MAX_COUNT_N:
        raise ValueError(f"n must lie in 1..{MAX_COUNT_N}, got {n}")
    with mp.workprec(64):
        bits = resolve_precision(precision, fallback=auto_precision(n, _check_theta0(theta0)))
    with mp.workprec(bits):
        spec = SymbolSpec(theta0=theta0)
        scale = mpc(1)
        try:
            values = _generating_values(spec, n, scale, bits)
        except SingularMinor as e:
            logger.warning(
                f"count_distribution n={n}: singular minor D_{e.k} on the unit circle nodes, "
                "retrying on a rotated circle"
            )
            scale = RETRY_RADIUS * mp.expj(mp.pi / (n + 1))
            values = _generating_values(spec, n, scale, bits)
        probs = tuple(_clamp(p, k) for k, p in enumerate(_invert(values, n, scale)))
        return CountDistribution(n=n, theta0=spec.theta0_value(), probs=probs, precision_bits=bits)


def log_tail_bound(
    theta0: Scalar, n: int, p: int, lam: Scalar | None = None, precision: int | None = None
) -> mpf:
    """
    ln of the Chernoff bound P(X >= p) <= e^{-pλ} E[e^{λX}] = e^{(n-p)λ} D_n(e^{-λ}, θ0, 0).

    Without `lam` the bound is taken at λ = n·x_c, near its minimum for large n.
    """
    if not 0 <= p <= n:
        raise ValueError(f"p must lie in 0..{n}, got {p}")
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        lam = n * x_critical(theta0, bits) if lam is None else to_mpf(lam)
        return log_mgf(theta0, n, lam, precision) - p * lam


def tail_bound(
    theta0: Scalar, n: int, p: int, lam: Scalar | None = None, precision: int | None = None
) -> mpf:
    bits = resolve_precision(precision)
    value = log_tail_bound(theta0, n, p, lam, precision)
    with mp.workprec(bits):
        return mp.exp(value)


def useful_threshold(theta0: Scalar, precision: int | None = None) -> mpf:
    """
    c = ln sin(θ0/2) / (2 ln tan(θ0/4)); the optimized bound is only informative for
      p above (1 - c)n.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0 = _check_theta0(theta0)
        return mp.log(mp.sin(theta0 / 2)) / (2 * mp.log(mp.tan(theta0 / 4)))


def asymptotic_tail_bound(
    theta0: Scalar, n: int, p: int, precision: int | None = None
) -> ExpansionValue:
    """
    Logarithm of the large-n form of the bound at λ = n·x_c:
      tan(θ0/4)^{-2n²+2pn} sin(θ0/2)^{n²} n^{-1/4} cos(θ0/2)^{-1/4} 2^{1/12} e^{3ζ'(-1)}.
    """
    if not 0 <= p <= n:
        raise ValueError(f"p must lie in 0..{n}, got {p}")
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0 = _check_theta0(theta0)
        terms = {
            "chernoff": 2 * n * (p - n) * mp.log(mp.tan(theta0 / 4)),
            "leading": n * n * mp.log(mp.sin(theta0 / 2)),
            "log": -mp.log(n) / 4,
            "endpoint": -mp.log(mp.cos(theta0 / 2)) / 4,
            "constant": widom_constant(bits),
        }
        return ExpansionValue.of(terms, bits)


def rate_exponent(theta0: Scalar, n: int, omega: Scalar, precision: int | None = None) -> mpf:
    """
    n²φ(θ0) - 2nω ln tan(θ0/4) - ¼ ln n with φ(θ0) = ln sin(θ0/2): the exponent governing
      P(X >= n - ω).
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0 = _check_theta0(theta0)
        omega = to_mpf(omega)
        return (
            n * n * mp.log(mp.sin(theta0 / 2))
            - 2 * n * omega * mp.log(mp.tan(theta0 / 4))
            - mp.log(n) / 4
        )
