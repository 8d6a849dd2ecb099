import logging
from functools import lru_cache
from typing import Any

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import DomainError, JumpPointError
from ..lib.expr import ScalarField, is_inf, to_mp, to_mpf
from ..numerics.precision import resolve_precision, tolerance
from ..numerics.quadrature import MAX_PANEL_WIDTH, panel_integrate

logger = logging.getLogger(__name__)


class WCoeff(BaseModel):
    """
    One coefficient W_k of W(z) = Σ_k W_k z^k.
    """

    model_config = ConfigDict(frozen=True)

    k: int
    re: ScalarField = 0
    im: ScalarField = 0

    def value(self) -> mpc:
        return mpc(to_mpf(self.re), to_mpf(self.im))


class TrigPolynomial(BaseModel):
    """
    A trigonometric polynomial W(e^{iθ}) = Σ_{|k| <= m_W} W_k e^{ikθ}, given by its nonzero
      coefficients. Accepts the JSON layout `[{"k": 1, "re": 0.3, "im": 0}, ...]` directly.

    All evaluation methods work at the current working precision.
    """

    model_config = ConfigDict(frozen=True)

    coeffs: tuple[WCoeff, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _from_list(cls, data: Any) -> Any:
        if isinstance(data, list | tuple):
            return {"coeffs": tuple(data)}
        if isinstance(data, dict) and "coeffs" not in data:
            # {"1": 0.3, "-1": 0.3} shorthand
            return {"coeffs": tuple({"k": int(k), "re": v} for k, v in data.items())}
        return data

    @field_validator("coeffs")
    @classmethod
    def _unique_orders(cls, coeffs: tuple[WCoeff, ...]) -> tuple[WCoeff, ...]:
        orders = [c.k for c in coeffs]
        if len(set(orders)) != len(orders):
            raise ValueError(f"Repeated coefficient orders in W: {sorted(orders)}")
        return tuple(sorted(coeffs, key=lambda c: c.k))

    @classmethod
    def symmetric(cls, values: dict[int, Any]) -> "TrigPolynomial":
        """
        W_{±k} = values[k] for k >= 1 and W_0 = values.get(0).
        """
        coeffs = []
        for k, v in values.items():
            coeffs.append(WCoeff(k=k, re=v))
            if k != 0:
                coeffs.append(WCoeff(k=-k, re=v))
        return cls(coeffs=tuple(coeffs))

    @property
    def degree(self) -> int:
        return max((abs(c.k) for c in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return all(c.value() == 0 for c in self.coeffs)

    def coefficient(self, k: int) -> mpc:
        for c in self.coeffs:
            if c.k == k:
                return c.value()
        return mpc(0)

    def is_real(self) -> bool:
        return all(to_mpf(c.im) == 0 for c in self.coeffs)

    def is_hermitian(self) -> bool:
        """W real-valued on the circle: W_{-k} = conj(W_k)."""
        return all(self.coefficient(-c.k) == mp.conj(c.value()) for c in self.coeffs)

    def is_symmetric_real(self) -> bool:
        """All W_k real and W_{-k} = W_k."""
        return self.is_real() and all(self.coefficient(-c.k) == c.value() for c in self.coeffs)

    def value(self, z: Any) -> Any:
        return mp.fsum(c.value() * mp.power(z, c.k) for c in self.coeffs)

    def derivative(self, z: Any) -> Any:
        return mp.fsum(c.k * c.value() * mp.power(z, c.k - 1) for c in self.coeffs if c.k)

    def on_circle(self, theta: Any) -> Any:
        return self.value(mp.expj(theta))


class GapParameter(BaseModel):
    """
    The gap value written as s = e^{-xn}. `x = "inf"` means s = 0 exactly.
    """

    model_config = ConfigDict(frozen=True)

    x: ScalarField
    n: int = Field(ge=1)

    @field_validator("x")
    @classmethod
    def _nonnegative(cls, x: Any) -> Any:
        if not is_inf(x):
            with mp.workprec(64):
                if to_mpf(x) < 0:
                    raise ValueError(f"x must be nonnegative, got {x!r}")
        return x

    def x_value(self) -> mpf:
        return mp.inf if is_inf(self.x) else to_mpf(self.x)

    def s(self) -> mpf:
        if is_inf(self.x):
            return mpf(0)
        return mp.exp(-to_mpf(self.x) * self.n)


class SymbolSpec(BaseModel):
    """
    The symbol f(e^{iθ}) = e^{W(e^{iθ})} · (a for |θ| < θ0, b for θ0 < |θ| <= π).

    The gap value is given as exactly one of `b` (general complex), `s` (in [0, 1]) or `gap`
      (s = e^{-xn}); without any of them b = 1. Values may be numbers or expressions such
      as "pi/2", and are evaluated at the working precision whenever they are read.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    theta0: ScalarField
    a: ScalarField = 1
    b: ScalarField = None
    s: ScalarField = None
    gap: GapParameter | None = None
    w: TrigPolynomial = Field(default_factory=TrigPolynomial, alias="W")
    symmetric_real: bool = False

    @model_validator(mode="after")
    def _check(self) -> "SymbolSpec":
        with mp.workprec(64):
            theta0 = to_mpf(self.theta0)
            if not 0 < theta0 < mp.pi:
                raise ValueError(f"theta0 must lie in (0, π), got {self.theta0!r}")
            given = [name for name in ("b", "s", "gap") if getattr(self, name) is not None]
            if len(given) > 1:
                raise ValueError(f"Give at most one of b, s, gap (got {', '.join(given)})")
            if self.s is not None and not 0 <= to_mpf(self.s) <= 1:
                raise ValueError(f"s must lie in [0, 1], got {self.s!r}")
        if self.symmetric_real and not self.w.is_symmetric_real():
            raise ValueError("symmetric_real is set but W is not real with W_{-k} = W_k")
        return self

    @classmethod
    def from_gap(
        cls, theta0: Any, gap: GapParameter, w: TrigPolynomial | None = None
    ) -> "SymbolSpec":
        return cls(theta0=theta0, gap=gap, W=w or TrigPolynomial())

    def theta0_value(self) -> mpf:
        return to_mpf(self.theta0)

    def arc_value(self) -> Any:
        return to_mp(self.a)

    def gap_value(self) -> Any:
        if self.b is not None:
            return to_mp(self.b)
        if self.s is not None:
            return to_mpf(self.s)
        if self.gap is not None:
            return self.gap.s()
        return mpf(1)

    def is_s_family(self) -> bool:
        """a = 1 and the gap value is a real s, so ∂_s makes sense."""
        return self.b is None and to_mp(self.a) == 1

    def is_hermitian(self) -> bool:
        """f is real-valued on the circle, so the Toeplitz matrix is Hermitian."""
        return (
            mp.im(self.arc_value()) == 0
            and mp.im(self.gap_value()) == 0
            and self.w.is_hermitian()
        )

    def with_s(self, s: Any) -> "SymbolSpec":
        """Same symbol with the gap value replaced by s (kept as given, no range check)."""
        return self.model_copy(update={"s": s, "b": None, "gap": None})

    def with_values(self, a: Any, b: Any) -> "SymbolSpec":
        return self.model_copy(update={"a": a, "b": b, "s": None, "gap": None})


class FourierCoefficients(BaseModel):
    """
    f_k for |k| <= k_max, indexable by k.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    k_max: int
    values: tuple[Any, ...]
    precision_bits: int

    def __getitem__(self, k: int) -> Any:
        if abs(k) > self.k_max:
            raise IndexError(f"Coefficient f_{k} not computed (k_max={self.k_max})")
        return self.values[k + self.k_max]


def _arc_moments_closed_form(theta0: mpf, k_max: int) -> tuple[list[Any], list[Any]]:
    arc = []
    for k in range(-k_max, k_max + 1):
        arc.append(theta0 / mp.pi if k == 0 else mp.sin(k * theta0) / (mp.pi * k))
    gap = [(1 if k == 0 else 0) - v for k, v in zip(range(-k_max, k_max + 1), arc)]
    return arc, gap


@lru_cache(maxsize=64)
def _arc_moments_quadrature(
    theta0: mpf, w: TrigPolynomial, k_max: int, bits: int
) -> tuple[tuple[Any, ...], tuple[Any, ...]]:
    """
    (1/2π) ∫ e^{W} e^{-ikθ} dθ over the arc |θ| < θ0 and over the gap, for |k| <= k_max.
    """
    with mp.workprec(bits):

        def integrand(theta: Any) -> list[Any]:
            z = mp.expj(theta)
            base = mp.exp(w.value(z)) / (2 * mp.pi)
            step = 1 / z
            # e^{-ikθ} for k = -k_max..k_max, built by repeated multiplication from e^{ik_max θ}
            term = base * mp.power(z, k_max)
            res = []
            for _ in range(2 * k_max + 1):
                res.append(term)
                term *= step
            return res

        width = min(MAX_PANEL_WIDTH, 4 / (k_max + 1))
        arc = panel_integrate(integrand, [-theta0, theta0], precision=bits, max_width=width)
        gap = panel_integrate(
            integrand, [theta0, 2 * mp.pi - theta0], precision=bits, max_width=width
        )
        logger.debug(f"W-moments for k_max={k_max} at {bits} bits computed by quadrature")
        return tuple(arc), tuple(gap)


def arc_gap_moments(
    spec: SymbolSpec, k_max: int, precision: int | None = None
) -> tuple[list[Any], list[Any]]:
    """
    (A_k, B_k) for |k| <= k_max with f_k = a·A_k + b·B_k: the Fourier coefficients of e^W
      restricted to the arc and to the gap.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        theta0 = spec.theta0_value()
        if spec.w.is_zero():
            return _arc_moments_closed_form(theta0, k_max)
        arc, gap = _arc_moments_quadrature(theta0, spec.w, k_max, bits)
        return list(arc), list(gap)


def fourier_coeffs(
    spec: SymbolSpec, k_max: int, precision: int | None = None
) -> FourierCoefficients:
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")
    bits = resolve_precision(precision)
    arc, gap = arc_gap_moments(spec, k_max, bits)
    with mp.workprec(bits):
        a, b = spec.arc_value(), spec.gap_value()
        values = tuple(a * x + b * y for x, y in zip(arc, gap))
    return FourierCoefficients(k_max=k_max, values=values, precision_bits=bits)


def fourier_coeff(spec: SymbolSpec, k: int, precision: int | None = None) -> Any:
    """
    f_k = (1/2π) ∫ f(e^{iθ}) e^{-ikθ} dθ.

    W = 0 uses the closed form f_0 = a θ0/π + b (1 - θ0/π), f_k = (a - b) sin(kθ0)/(πk);
      otherwise panel quadrature split at ±θ0 (`QuadratureNotConverged` on failure).
    """
    return fourier_coeffs(spec, abs(k), precision)[k]


def ds_fourier_coeffs(
    spec: SymbolSpec, k_max: int, precision: int | None = None
) -> FourierCoefficients:
    if not spec.is_s_family():
        raise DomainError("∂_s f_k needs a = 1 with the gap value given as s")
    bits = resolve_precision(precision)
    _, gap = arc_gap_moments(spec, k_max, bits)
    return FourierCoefficients(k_max=k_max, values=tuple(gap), precision_bits=bits)


def ds_fourier_coeff(spec: SymbolSpec, k: int, precision: int | None = None) -> Any:
    """
    ∂_s f_k = (1/2π) ∫_gap e^{W} e^{-ikθ} dθ (f_k is affine in s).
    """
    return ds_fourier_coeffs(spec, abs(k), precision)[k]


def _reduce_angle(theta: Any) -> mpf:
    # Into (-π, π]
    theta = mp.fmod(theta, 2 * mp.pi)
    if theta > mp.pi:
        theta -= 2 * mp.pi
    elif theta <= -mp.pi:
        theta += 2 * mp.pi
    return theta


def _on_arc(spec: SymbolSpec, theta: Any, bits: int) -> bool:
    theta0 = spec.theta0_value()
    t = abs(_reduce_angle(to_mpf(theta)))
    if abs(t - theta0) <= tolerance(bits, 0.9):
        raise JumpPointError(f"θ={mp.nstr(theta, 10)} is a jump point ±θ0 of the symbol")
    return t < theta0


def symbol_eval(spec: SymbolSpec, theta: Any, precision: int | None = None) -> Any:
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        value = spec.arc_value() if _on_arc(spec, theta, bits) else spec.gap_value()
        return value * mp.exp(spec.w.on_circle(to_mpf(theta)))


def symbol_ds_eval(spec: SymbolSpec, theta: Any, precision: int | None = None) -> Any:
    """∂_s f(e^{iθ}): e^{W} on the gap, 0 on the arc."""
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        if _on_arc(spec, theta, bits):
            return mpf(0)
        return mp.exp(spec.w.on_circle(to_mpf(theta)))


class SymbolPiece(BaseModel):
    """
    One arc of the circle on which f is analytic: f(e^{iθ}) = value · e^{W(e^{iθ})} for θ
      between consecutive `edges`.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    edges: tuple[Any, ...]
    value: Any
    w: TrigPolynomial

    def weight(self, theta: Any) -> Any:
        if self.w.coeffs:
            return self.value * mp.exp(self.w.on_circle(theta))
        return self.value


def symbol_pieces(
    spec: SymbolSpec, breaks: tuple[Any, ...] = (), ds: bool = False, keep_zero: bool = False
) -> list[SymbolPiece]:
    """
    The arc [-θ0, θ0] and the gap [θ0, 2π - θ0] with their values (a, b, or 0, 1 for ∂_s f),
      each split at the given extra breakpoints. Pieces with value 0 are dropped unless
      `keep_zero` is set.
    """
    theta0 = spec.theta0_value()
    arc_edges, gap_edges = [-theta0, theta0], [theta0, 2 * mp.pi - theta0]
    for t in breaks:
        t = _reduce_angle(to_mpf(t))
        if -theta0 < t < theta0:
            arc_edges.append(t)
        else:
            t = t + 2 * mp.pi if t < 0 else t
            if theta0 < t < 2 * mp.pi - theta0:
                gap_edges.append(t)
    arc_value, gap_value = (mpf(0), mpf(1)) if ds else (spec.arc_value(), spec.gap_value())
    pieces = []
    for edges, value in ((arc_edges, arc_value), (gap_edges, gap_value)):
        if value != 0 or keep_zero:
            pieces.append(SymbolPiece(edges=tuple(sorted(set(edges))), value=value, w=spec.w))
    return pieces


def integrate_against_symbol(
    spec: SymbolSpec,
    g: Any,
    precision: int | None = None,
    breaks: tuple[Any, ...] = (),
    ds: bool = False,
    max_width: float = MAX_PANEL_WIDTH,
    tol: Any = None,
) -> Any:
    """
    (1/2π) ∫_0^{2π} g(θ) f(e^{iθ}) dθ (or against ∂_s f with `ds=True`), by panel quadrature
      on each piece where f is analytic. `g` may return a scalar or a list.
    """
    bits = resolve_precision(precision)
    with mp.workprec(bits):
        total: Any = None
        for piece in symbol_pieces(spec, breaks, ds):

            def integrand(t: Any, piece: SymbolPiece = piece) -> Any:
                v, wt = g(t), piece.weight(t)
                return [wt * vi for vi in v] if isinstance(v, list) else wt * v

            res = panel_integrate(
                integrand, piece.edges, precision=bits, max_width=max_width, tol=tol
            )
            if total is None:
                total = res
            elif isinstance(res, list):
                total = [x + y for x, y in zip(total, res)]
            else:
                total += res
        if total is None:
            return mpf(0)
        two_pi = 2 * mp.pi
        return [x / two_pi for x in total] if isinstance(total, list) else total / two_pi
