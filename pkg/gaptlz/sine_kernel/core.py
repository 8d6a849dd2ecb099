import logging
from typing import Any

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..asymptotics import ExpansionValue, x_critical
from ..errors import DomainError, NotConverged, SingularMinor
from ..lib.expr import ScalarField, to_mpf
from ..lib.types import Scalar
from ..numerics.precision import auto_precision, resolve_precision
from ..numerics.quadrature import gauss_legendre
from ..numerics.special import widom_constant
from ..symbol import SymbolSpec
from ..toeplitz import log_det

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 48
# Orders m and 2m must agree this well for a converged Fredholm determinant
CONVERGENCE_TOL = mpf(10) ** -10
# θ0 = π(1 - 2y/n) is kept away from 0 by asking for n > MIN_N_PER_Y * y
MIN_N_PER_Y = 20


class FredholmSpec(BaseModel):
    """
    det(1 - (1 - s) K_y) for the sine kernel sin π(x - t) / π(x - t) on (-y, y), discretized
      with `m` Gauss-Legendre nodes (and checked against 2m).
    """

    model_config = ConfigDict(frozen=True)

    y: ScalarField
    s: ScalarField = 0
    m: int = Field(default=DEFAULT_ORDER, ge=4)

    @field_validator("y")
    @classmethod
    def _positive(cls, y: Any) -> Any:
        with mp.workprec(64):
            if not to_mpf(y) > 0:
                raise ValueError(f"y must be positive, got {y!r}")
        return y

    @field_validator("s")
    @classmethod
    def _unit_interval(cls, s: Any) -> Any:
        with mp.workprec(64):
            if not 0 <= to_mpf(s) <= 1:
                raise ValueError(f"s must lie in [0, 1], got {s!r}")
        return s


def _sinc(u: Any) -> Any:
    if u == 0:
        return mpf(1)
    return mp.sin(mp.pi * u) / (mp.pi * u)


def _nystrom_kernel(y: mpf, m: int, bits: int) -> Any:
    """√w_i k(x_i, x_j) √w_j on the Gauss-Legendre nodes of (-y, y)."""
    rule = gauss_legendre(m, bits)
    nodes = [y * t for t in rule.nodes]
    roots = [mp.sqrt(y * w) for w in rule.weights]
    return mp.matrix(
        [[roots[i] * _sinc(nodes[i] - nodes[j]) * roots[j] for j in range(m)] for i in range(m)]
    )


def nystrom_log_det(y: Scalar, s: Scalar, m: int, precision: int | None = None) -> mpf:
    """
    ln det(1 - (1 - s) K_y) at one Nyström order `m`, from the LU pivots.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        y, s = to_mpf(y), to_mpf(s)
        if s == 1:
            return mpf(0)
        k = _nystrom_kernel(y, m, bits)
        a = mp.eye(m) - (1 - s) * k
        try:
            lu, _ = mp.LU_decomp(a)
        except ZeroDivisionError:
            raise SingularMinor(m, f"Nyström matrix of order {m} is singular")
        # The operator is positive definite, so only the pivot magnitudes matter
        return mp.fsum(mp.log(abs(lu[j, j])) for j in range(m))


def fredholm_logdet(spec: FredholmSpec, precision: int | None = None) -> mpf:
    """
    ln det(1 - (1 - s) K_y), the 2m value after checking it against order m.
    """
    bits = resolve_precision(precision)
    coarse = nystrom_log_det(spec.y, spec.s, spec.m, bits)
    fine = nystrom_log_det(spec.y, spec.s, 2 * spec.m, bits)
    with mp.workprec(bits):
        diff = abs(fine - coarse)
    logger.debug(f"fredholm_logdet y={spec.y} m={spec.m}: |m - 2m| = {mp.nstr(diff, 5)}")
    if diff > CONVERGENCE_TOL:
        raise NotConverged(
            f"Nyström orders {spec.m} and {2 * spec.m} differ by {mp.nstr(diff, 5)} "
            f"for y={spec.y}; increase m"
        )
    return fine


def sine_kernel_eigenvalues(
    y: Scalar, m: int = DEFAULT_ORDER, precision: int | None = None
) -> tuple[mpf, ...]:
    """
    Eigenvalues of the symmetrized Nyström matrix of K_y, in increasing order.
    """
    if m < 4:
        raise ValueError(f"Quadrature order must be at least 4, got {m}")
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        y = to_mpf(y)
        if not y > 0:
            raise DomainError(f"y must be positive, got {mp.nstr(y, 10)}")
        values = mp.eigsy(_nystrom_kernel(y, m, bits), eigvals_only=True)
        return tuple(sorted(values[j] for j in range(m)))


def large_gap_expansion(y: Scalar, precision: int | None = None) -> ExpansionValue:
    """-π²y²/2 - ¼ ln(πy) + c, the s = 0 determinant for large y."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        y = to_mpf(y)
        if not y > 0:
            raise DomainError(f"y must be positive, got {mp.nstr(y, 10)}")
        terms = {
            "leading": -(mp.pi**2) * y * y / 2,
            "log": -mp.log(mp.pi * y) / 4,
            "constant": widom_constant(bits),
        }
        return ExpansionValue.of(terms, bits)


def _shrinking_gap_theta0(y: mpf, n: int) -> mpf:
    if not n > MIN_N_PER_Y * y:
        raise DomainError(f"Need n > {MIN_N_PER_Y}·y for the shrinking gap, got y={y}, n={n}")
    return mp.pi * (1 - 2 * y / n)


def toeplitz_fredholm_gap(
    y: Scalar, s: Scalar, n: int, precision: int | None = None, m: int = DEFAULT_ORDER
) -> mpf:
    """
    |ln D_n(s, θ0 = π(1 - 2y/n), W = 0) - ln det(1 - (1 - s) K_y)|, which tends to 0 as n grows.
    """
    with mp.workprec(64):
        coarse_theta0 = _shrinking_gap_theta0(to_mpf(y), n)
    bits = resolve_precision(precision, fallback=auto_precision(n, coarse_theta0))
    with mp.workprec(bits):
        y_value = to_mpf(y)
        theta0 = _shrinking_gap_theta0(y_value, n)
        toeplitz = log_det(SymbolSpec(theta0=theta0, s=s), n, bits, validate=False)
    fredholm = fredholm_logdet(FredholmSpec(y=y, s=s, m=m), bits)
    with mp.workprec(bits):
        gap = abs(mp.re(toeplitz.ln_d) - fredholm)
    logger.debug(f"toeplitz_fredholm_gap y={y} n={n}: {mp.nstr(gap, 5)}")
    return gap


def critical_scaling_gap(y: Scalar, n: int, precision: int | None = None) -> mpf:
    """|n·x_c(π(1 - 2y/n)) - 2πy|, of order y³/n²."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        y = to_mpf(y)
        theta0 = _shrinking_gap_theta0(y, n)
        return abs(n * x_critical(theta0, bits) - 2 * mp.pi * y)
