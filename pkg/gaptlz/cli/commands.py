"""
One runner per subcommand. A runner sweeps the grids of a `RunConfig` in order and returns
one `Ok(row)` or `Err(row)` per table row, so a failing grid point never stops the run.
"""

import logging
from collections.abc import Callable, Iterator
from typing import Any

from mpmath import mp, mpf
from result import Err, Ok, Result

from ..asymptotics import (
    ExpansionValue,
    fisher_hartwig_expansion,
    szego_expansion,
    theorem_error_envelope,
    widom_expansion,
    x_critical,
)
from ..cue import count_distribution, log_tail_bound
from ..equilibrium import equilibrium, normalization, variational_residuals
from ..errors import DomainError, GaptlzError
from ..lib.expr import is_inf, to_mpf
from ..lib.types import JumpObject, LocalPoint, Scalar
from ..numerics.precision import auto_precision, resolve_precision
from ..parametrix import (
    ParametrixContext,
    extrapolated_jump_residual,
    jump_residual,
    lens_points,
    matching_residual,
)
from ..parametrix.bessel import RAY_ANGLE
from ..sine_kernel import FredholmSpec, fredholm_logdet, large_gap_expansion
from ..symbol import GapParameter, SymbolSpec, TrigPolynomial
from ..toeplitz import log_det
from ..validation import AtLeast, AtMost, CloseTo, Decreasing, IsFinite, Rule, summarize, validate
from .config import MATCHING, Command, RunConfig
from .output import format_value

logger = logging.getLogger(__name__)

Row = dict[str, Any]
RowResult = Result[Row, Row]
CommandOutput = tuple[list[RowResult], list[Row] | None]

RECOVERABLE = (GaptlzError, ValueError, ArithmeticError)
# Growth allowed for Δ_n / envelope between the first and last n of a verify-theorem sweep
RATIO_GROWTH = mpf("1.5")
JUMP_TOL = "1e-8"

EQUILIBRIUM_CHECKS = {
    "normalization": CloseTo(1, "1e-9"),
    "equality_residual": AtMost("1e-6"),
    "min_margin": AtLeast("-1e-9"),
}


def _bounded_growth(values: list[Any]) -> bool:
    return values[-1] <= RATIO_GROWTH * values[0]


THEOREM_SWEEP_CHECKS = {
    "delta": Decreasing(),
    "ratio": Rule(_bounded_growth, name="BoundedGrowth"),
}


def attempt(row: Row, compute: Callable[[], Row]) -> RowResult:
    """
    `Ok(row + computed values)`, or `Err(row + error)` with the exception class and message.
    """
    try:
        return Ok({**row, **compute()})
    except RECOVERABLE as e:
        logger.info(f"{row}: {type(e).__name__}: {e}")
        return Err({**row, "error": f"{type(e).__name__}: {e}"})


def _theta0_value(theta0: Scalar) -> mpf:
    with mp.workprec(64):
        return to_mpf(theta0)


def _gap_grid(config: RunConfig, default: tuple[str, Any]) -> Iterator[tuple[str, Any]]:
    if config.s is not None:
        yield from (("s", s) for s in config.s)
    elif config.x is not None:
        yield from (("x", x) for x in config.x)
    else:
        yield default


def _spec(theta0: Scalar, n: int, kind: str, value: Any, w: TrigPolynomial) -> SymbolSpec:
    if kind == "x":
        return SymbolSpec.from_gap(theta0, GapParameter(x=value, n=n), w)
    return SymbolSpec(theta0=theta0, s=value, W=w)


def run_logdet(config: RunConfig) -> CommandOutput:
    results = []
    for theta0 in config.theta0:
        for kind, value in _gap_grid(config, ("s", 0)):
            for n in config.n:
                logger.info(f"logdet θ0={theta0} {kind}={value} n={n}")

                def compute(theta0=theta0, kind=kind, value=value, n=n) -> Row:
                    spec = _spec(theta0, n, kind, value, config.w)
                    res = log_det(spec, n, config.precision)
                    with mp.workprec(res.precision_bits):
                        s = spec.gap_value()
                    return {
                        "s": s,
                        "ln_det": res.ln_d,
                        "precision_bits": res.precision_bits,
                        "validated": res.validated,
                    }

                row = {"theta0": theta0, "n": n, "s": value if kind == "s" else None}
                results.append(attempt(row, compute))
    return results, None


def _expansion(
    theta0: Scalar, n: int, kind: str, value: Any, config: RunConfig, bits: int
) -> tuple[str, ExpansionValue]:
    """The expansion for the regime of (θ0, gap value), with its name."""
    with mp.workprec(bits):
        if kind == "x":
            x_c = x_critical(theta0, bits)
            if is_inf(value) or to_mpf(value) >= x_c * (1 - mpf(2) ** (-bits // 2)):
                return "widom", widom_expansion(theta0, config.w, n, config.k_max, bits)
            raise DomainError(f"No expansion for x < x_c = {mp.nstr(x_c, 10)} (two-arc regime)")
        s = to_mpf(value)
        if s == 1:
            return "szego", szego_expansion(config.w, n, bits)
        if s == 0:
            return "widom", widom_expansion(theta0, config.w, n, config.k_max, bits)
        return "fisher_hartwig", fisher_hartwig_expansion(s, theta0, config.w, n, bits)


def run_asym(config: RunConfig) -> CommandOutput:
    results = []
    bits = resolve_precision(config.precision)
    for theta0 in config.theta0:
        for kind, value in _gap_grid(config, ("s", 0)):
            for n in config.n:
                logger.info(f"asym θ0={theta0} {kind}={value} n={n}")

                def compute(theta0=theta0, kind=kind, value=value, n=n) -> Row:
                    regime, expansion = _expansion(theta0, n, kind, value, config, bits)
                    spec = _spec(theta0, n, kind, value, config.w)
                    res = log_det(spec, n, config.precision)
                    with mp.workprec(res.precision_bits):
                        return {
                            "regime": regime,
                            "expansion": expansion.value,
                            "log_det": res.ln_d,
                            "residual": res.ln_d - expansion.value,
                        }

                row = {"theta0": theta0, "n": n, "s": value if kind == "s" else None}
                results.append(attempt(row, compute))
    return results, None


def _theorem_row(theta0: Scalar, n: int, kind: str, value: Any, config: RunConfig) -> Row:
    bits = config.precision or auto_precision(n, _theta0_value(theta0))
    with mp.workprec(bits):
        if value is None:
            s = mp.exp(-n * x_critical(theta0, bits))
        elif kind == "x":
            s = GapParameter(x=value, n=n).s()
        else:
            s = to_mpf(value)
        spec = SymbolSpec(theta0=theta0, s=s, W=config.w)
        ln_s = log_det(spec, n, bits).ln_d
        ln_0 = log_det(spec.with_s(0), n, bits).ln_d
        delta = abs(ln_s - ln_0)
        envelope = theorem_error_envelope(n, theta0, s, precision=bits)
        ratio = delta / envelope if envelope else None
        checks = validate({"delta": delta, "ratio": ratio}, {"delta": IsFinite()})
        return {
            "s": s,
            "ln_det_s": ln_s,
            "ln_det_0": ln_0,
            "delta": delta,
            "envelope": envelope,
            "ratio": ratio,
            "checks": summarize(checks),
        }


def _merge_checks(row_checks: str, sweep_checks: str) -> str:
    failing = [c for c in (row_checks, sweep_checks) if c != "ok"]
    return ";".join(failing) or "ok"


def run_verify_theorem(config: RunConfig) -> CommandOutput:
    """
    Δ_n = |ln D_n(s) - ln D_n(0)| against n^{-1/2} e^{x_c n} s for every n. Without a gap grid
      s = e^{-x_c n}. Each sweep over n must have Δ_n decreasing and Δ_n / envelope growing by at
      most 1.5×.
    """
    results: list[RowResult] = []
    for theta0 in config.theta0:
        for kind, value in _gap_grid(config, ("x", None)):
            sweep = []
            for n in config.n:
                logger.info(f"verify-theorem θ0={theta0} {kind}={value} n={n}")

                def compute(theta0=theta0, kind=kind, value=value, n=n) -> Row:
                    return _theorem_row(theta0, n, kind, value, config)

                row = {"theta0": theta0, "n": n, "s": value if kind == "s" else None}
                sweep.append(attempt(row, compute))
            ok_rows = [r.ok_value for r in sweep if isinstance(r, Ok)]
            values = {k: [row[k] for row in ok_rows] for k in ("delta", "ratio")}
            if ok_rows and all(v is not None for v in values["ratio"]):
                sweep_checks = summarize(validate(values, THEOREM_SWEEP_CHECKS))
            else:
                sweep_checks = summarize(validate(values, {"delta": Decreasing()}))
            for r in sweep:
                if isinstance(r, Ok):
                    row = r.ok_value
                    r = Ok({**row, "checks": _merge_checks(row["checks"], sweep_checks)})
                results.append(r)
    return results, None


def run_equilibrium(config: RunConfig) -> CommandOutput:
    results = []
    bits = resolve_precision(config.precision)
    for theta0 in config.theta0:
        for x in config.x or ("inf",):
            logger.info(f"equilibrium θ0={theta0} x={x}")

            def compute(theta0=theta0, x=x) -> Row:
                data = equilibrium(theta0, x, bits)
                report = variational_residuals(data, config.grid_size)
                values = {
                    "regime": report.regime,
                    "theta1": report.theta1,
                    "ell": report.ell,
                    "normalization": normalization(data),
                    "equality_residual": report.equality_residual,
                    "min_margin": report.min_margin,
                }
                return {**values, "checks": summarize(validate(values, EQUILIBRIUM_CHECKS))}

            results.append(attempt({"theta0": theta0, "x": x}, compute))
    return results, None


def _check_points(ctx: ParametrixContext, obj: str, config: RunConfig) -> list[tuple[str, Any]]:
    """(object label, point) pairs where `obj` is checked."""
    z0, r, theta0 = ctx.z0(), ctx.radius(), ctx.theta0_value()
    zb = mp.conj(z0)
    if obj == MATCHING:
        return [(f"{MATCHING}-{which.value}", ctx.center(which)) for which in LocalPoint]
    match JumpObject(obj):
        case JumpObject.P:
            points = [z0 * mp.expj(-r / 2), z0 * mp.expj(r / 2), zb * mp.expj(r / 2)]
            points += [zb * mp.expj(-r / 2), mp.expj(mp.pi + r / 4)]
        case JumpObject.P_INF:
            points = [mp.expj(theta0 / 2), mp.expj(-theta0 / 2)]
        case JumpObject.S:
            points = [lens_points(ctx, config.side, 1)[0], mp.expj((mp.pi + theta0) / 2)]
        case JumpObject.PSI:
            points = [mpf(-4), 2 * mp.expj(RAY_ANGLE), 2 * mp.expj(-RAY_ANGLE)]
        case JumpObject.PSI_HAT:
            points = [mpf(2), mpf(-2)]
    return [(obj, p) for p in points]


def _residual(ctx: ParametrixContext, label: str, point: Any, config: RunConfig, bits: int) -> Row:
    if label.startswith(MATCHING):
        which = LocalPoint(label.removeprefix(f"{MATCHING}-"))
        residual = matching_residual(ctx, which, precision=bits)
        return {"offset": ctx.radius(), "residual": residual, "checks": "ok"}
    if config.offset is not None:
        residual = jump_residual(ctx, label, point, config.offset, bits)
        offset: Any = config.offset
    else:
        residual = extrapolated_jump_residual(ctx, label, point, precision=bits)
        offset = "0"
    # ‖J_S - I‖ is only reported
    rule = IsFinite() if label == JumpObject.S.value else AtMost(JUMP_TOL)
    return {
        "offset": offset,
        "residual": residual,
        "checks": summarize(validate({"residual": residual}, {"residual": rule})),
    }


def _parametrix_rows(base: Row, config: RunConfig, bits: int) -> list[RowResult]:
    """Rows for one (θ0, n, x): a context, then every point of every requested object."""
    setup = attempt(
        base,
        lambda: {
            "ctx": ParametrixContext(theta0=base["theta0"], n=base["n"], x=base["x"], W=config.w)
        },
    )
    if isinstance(setup, Err):
        return [setup]
    ctx = setup.ok_value["ctx"]
    results: list[RowResult] = []
    for obj in config.objects:
        points = attempt(
            {**base, "object": obj}, lambda obj=obj: {"at": _check_points(ctx, obj, config)}
        )
        if isinstance(points, Err):
            results.append(points)
            continue
        for label, point in points.ok_value["at"]:
            row = {**base, "object": label, "point_re": mp.re(point), "point_im": mp.im(point)}
            results.append(
                attempt(
                    row,
                    lambda label=label, point=point: _residual(ctx, label, point, config, bits),
                )
            )
    return results


def run_parametrix_check(config: RunConfig) -> CommandOutput:
    results: list[RowResult] = []
    bits = resolve_precision(config.precision)
    for theta0 in config.theta0:
        for x in config.x or ("inf",):
            for n in config.n:
                logger.info(f"parametrix-check θ0={theta0} x={x} n={n}")
                base = {"theta0": theta0, "n": n, "x": x}
                with mp.workprec(bits):
                    results.extend(_parametrix_rows(base, config, bits))
    return results, None


def run_sine_kernel(config: RunConfig) -> CommandOutput:
    results = []
    bits = resolve_precision(config.precision)
    for y in config.y:
        for s in config.s or (0,):
            logger.info(f"sine-kernel y={y} s={s}")

            def compute(y=y, s=s) -> Row:
                ln_det = fredholm_logdet(FredholmSpec(y=y, s=s, m=config.m), bits)
                with mp.workprec(bits):
                    if to_mpf(s) != 0:
                        return {"ln_det": ln_det}
                    expansion = large_gap_expansion(y, bits).value
                    return {
                        "ln_det": ln_det,
                        "expansion": expansion,
                        "residual": abs(ln_det - expansion),
                    }

            results.append(attempt({"y": y, "s": s, "m": config.m}, compute))
    return results, None


def _tail_bounds(theta0: Scalar, n: int, dist: Any, config: RunConfig) -> list[Row]:
    bounds = []
    for p in config.p or ():
        for lam in config.lam or (None,):
            log_bound = log_tail_bound(theta0, n, p, lam, config.precision)
            with mp.workprec(dist.precision_bits):
                bounds.append(
                    {"p": p, "lambda": lam, "bound": mp.exp(log_bound), "tail": dist.tail(p)}
                )
    return bounds


def run_cue(config: RunConfig) -> CommandOutput:
    """
    CSV rows (k, p_k) per grid point; the JSON form is one record per grid point with the
      full distribution and, for every --p (and --lambda), the Chernoff bound next to the
      exact tail.
    """
    results: list[RowResult] = []
    records: list[Row] = []

    def fmt(value: Any) -> Any:
        return format_value(value, config.digits)

    for theta0 in config.theta0:
        for n in config.n:
            logger.info(f"cue θ0={theta0} n={n}")
            base = {"theta0": theta0, "n": n}

            def compute(theta0=theta0, n=n) -> Row:
                dist = count_distribution(theta0, n, config.precision)
                return {"dist": dist, "bounds": _tail_bounds(theta0, n, dist, config)}

            res = attempt(base, compute)
            if isinstance(res, Err):
                results.append(res)
                records.append({k: fmt(v) for k, v in res.err_value.items()})
                continue
            dist, bounds = res.ok_value["dist"], res.ok_value["bounds"]
            results.extend(Ok({**base, "k": k, "p_k": p}) for k, p in enumerate(dist.probs))
            records.append(
                {
                    "theta0": fmt(theta0),
                    "n": n,
                    "probs": [fmt(p) for p in dist.probs],
                    "mean": fmt(dist.mean()),
                    "variance": fmt(dist.variance()),
                    "tail_bounds": [{k: fmt(v) for k, v in b.items()} for b in bounds],
                    "error": "",
                }
            )
    return results, records


COMMANDS: dict[Command, Callable[[RunConfig], CommandOutput]] = {
    Command.LOGDET: run_logdet,
    Command.ASYM: run_asym,
    Command.VERIFY_THEOREM: run_verify_theorem,
    Command.EQUILIBRIUM: run_equilibrium,
    Command.PARAMETRIX_CHECK: run_parametrix_check,
    Command.SINE_KERNEL: run_sine_kernel,
    Command.CUE: run_cue,
}
