import pytest
from mpmath import mp, mpf

from gaptlz.asymptotics import (
    critical_s,
    fisher_hartwig_expansion,
    geometric_tail_bound,
    large_y_expansion,
    mapped_w_coeffs,
    szego_expansion,
    theorem_error_envelope,
    widom_expansion,
    x_critical,
)
from gaptlz.errors import DomainError, SymmetryViolation
from gaptlz.symbol import SymbolSpec, TrigPolynomial
from gaptlz.toeplitz import log_det

TOL = mpf(10) ** -30


def test_x_critical() -> None:
    with mp.workprec(128):
        assert abs(x_critical("pi/2", 128) + 2 * mp.log(mp.sqrt(2) - 1)) < TOL
        assert abs(x_critical("pi/2", 128) - mpf("1.762747")) < mpf(10) ** -6
        assert x_critical("pi/3") > x_critical("pi/2") > x_critical("2*pi/3")
        assert x_critical("pi*(1-1/10000)") < mpf(10) ** -3
        assert abs(critical_s("pi/2", 3, 128) - mp.tan(mp.pi / 8) ** 6) < TOL
    with pytest.raises(DomainError):
        x_critical(0)


def test_theorem_error_envelope() -> None:
    with mp.workprec(128):
        for n in (4, 16):
            s = critical_s("pi/2", n, 128)
            assert abs(theorem_error_envelope(n, "pi/2", s, precision=128) - 1 / mp.sqrt(n)) < TOL
        assert theorem_error_envelope(10, "pi/2", 0) == 0
        big = theorem_error_envelope(16, "pi/2", critical_s("pi/2", 16))
        ratio = big / theorem_error_envelope(4, "pi/2", critical_s("pi/2", 4))
        assert abs(ratio - mpf(1) / 2) < mpf(10) ** -20

        s = critical_s("pi/2", 16, 128) / 2
        weighted = theorem_error_envelope(16, "pi/2", s, weighted=True, precision=128)
        assert abs(weighted - mp.sqrt(mp.pi / 2) / 8) < TOL

    with pytest.raises(DomainError):
        theorem_error_envelope(10, "pi/2", "0.5")


def test_widom_expansion_constants() -> None:
    res = widom_expansion("pi/2", TrigPolynomial(), 10, precision=128)
    with mp.workprec(128):
        assert abs(res.value - mpf("-35.585")) < mpf(10) ** -3
        assert res.terms["series"] == 0
        assert res.truncation_bound == 0
        assert res.value == mp.fsum(res.terms.values())


def test_mapped_w_coeffs(w_pm1: TrigPolynomial) -> None:
    low = mapped_w_coeffs("pi/2", w_pm1, 8, 128)
    high = mapped_w_coeffs("pi/2", w_pm1, 8, 192)
    with mp.workprec(128):
        assert all(abs(a - b) < mpf(10) ** -30 for a, b in zip(low, high))
        # 0.6 cos(2 arcsin(u)) = 0.6 (1 - 2u²) with u = sin(θ0/2) sin(θ/2)
        assert abs(low[0] - mpf("0.3")) < TOL
        assert abs(low[1] - mpf("0.15")) < TOL
        assert all(abs(c) < TOL for c in low[2:])

        wide = mapped_w_coeffs("2*pi/5", w_pm1, 2, 128)
        assert abs(wide[0] - mpf("0.6") * mp.cos(mp.pi / 5) ** 2) < TOL

        constant = mapped_w_coeffs("pi/3", TrigPolynomial.symmetric({0: 0.5}), 4, 128)
        assert abs(constant[0] - mpf("0.5")) < TOL
        assert all(abs(c) < TOL for c in constant[1:])


def test_geometric_tail_bound() -> None:
    with mp.workprec(128):
        q = mpf(1) / 2
        coeffs = [q**k for k in range(11)]
        exact = mp.nsum(lambda k: k * q ** (2 * k), [11, mp.inf])
        assert abs(geometric_tail_bound(coeffs) - exact) < mpf(10) ** -25
        assert geometric_tail_bound([1, 1, 1, 1, 1]) == mp.inf
        assert geometric_tail_bound([1, q]) == mp.inf
        assert geometric_tail_bound(coeffs + [mpf(10) ** -40], floor=mpf(10) ** -30) == 0


def test_widom_expansion_truncation(w_pm1: TrigPolynomial) -> None:
    short = widom_expansion("pi/2", w_pm1, 10, k_max=1, precision=128)
    long = widom_expansion("pi/2", w_pm1, 10, k_max=32, precision=128)
    with mp.workprec(128):
        assert short.truncation_bound == long.truncation_bound == 0
        assert abs(short.value - long.value) < TOL
        assert abs(long.terms["linear"] - 3) < TOL
    with pytest.raises(SymmetryViolation):
        widom_expansion("pi/2", TrigPolynomial.model_validate({"1": 0.3}), 10)
    with pytest.raises(ValueError):
        widom_expansion("pi/2", w_pm1, 10, k_max=0)


def test_large_y_expansion() -> None:
    with mp.workprec(128):
        shrinking = large_y_expansion(2, 50, 128)
        widom = widom_expansion("pi*(1-4/50)", TrigPolynomial(), 50, precision=128)
        assert abs(shrinking.value - widom.value) < mpf(10) ** -25
    with pytest.raises(DomainError):
        large_y_expansion(30, 50)


def test_szego_expansion(w_pm1: TrigPolynomial) -> None:
    with mp.workprec(128):
        assert szego_expansion(TrigPolynomial(), 10).value == 0
        assert abs(szego_expansion(w_pm1, 5, 128).value - mpf("0.09")) < TOL
        w0 = TrigPolynomial.symmetric({0: 0.1})
        assert abs(szego_expansion(w0, 7, 128).value - mpf("0.7")) < TOL


def test_fisher_hartwig_expansion(w_pm1: TrigPolynomial) -> None:
    with mp.workprec(128):
        at_one = fisher_hartwig_expansion(1, "pi/2", w_pm1, 20, 128)
        assert abs(at_one.value - szego_expansion(w_pm1, 20, 128).value) < TOL

        res = fisher_hartwig_expansion("0.5", "pi/2", w_pm1, 20, 128)
        assert abs(res.terms["cross"] - mp.log(mpf("0.5")) / mp.pi * mpf("0.6")) < TOL
        beta = mp.log(mpf("0.5")) / (2j * mp.pi)
        assert abs(res.terms["barnes"] - 4 * mp.log(abs(mp.barnesg(1 + beta)))) < TOL

        # All s-dependent terms vanish as s -> 1
        gaps = []
        for s in ("0.9", "0.99", "0.999"):
            fh = fisher_hartwig_expansion(s, "pi/2", TrigPolynomial(), 20, 128).value
            gaps.append(abs(fh))
        assert gaps[0] > gaps[1] > gaps[2]

    with pytest.raises(DomainError):
        fisher_hartwig_expansion(0, "pi/2", w_pm1, 20)


def test_widom_residual_decreases() -> None:
    residuals = []
    for n in (10, 20, 40):
        spec = SymbolSpec(theta0="pi/2", s=0)
        ln_d = log_det(spec, n).ln_d
        residuals.append(abs(ln_d - widom_expansion("pi/2", TrigPolynomial(), n).value))
    assert residuals[0] > residuals[1] > residuals[2]


def test_szego_limit(w_pm1: TrigPolynomial) -> None:
    spec = SymbolSpec(theta0="pi/2", s=1, W=w_pm1)
    assert abs(log_det(spec, 40).ln_d - mpf("0.09")) < mpf(10) ** -6


@pytest.mark.slow
def test_widom_residual_rate() -> None:
    spec = SymbolSpec(theta0="pi/2", s=0)
    residuals = {
        n: abs(log_det(spec, n).ln_d - widom_expansion("pi/2", TrigPolynomial(), n).value)
        for n in (10, 20, 40, 80)
    }
    assert residuals[80] < residuals[10] / 4


@pytest.mark.slow
def test_fisher_hartwig_residual_decreases() -> None:
    spec = SymbolSpec(theta0="pi/2", s="0.5")
    residuals = []
    for n in (20, 40, 80):
        expansion = fisher_hartwig_expansion("0.5", "pi/2", TrigPolynomial(), n)
        residuals.append(abs(log_det(spec, n).ln_d - expansion.value))
    assert residuals[0] > residuals[1] > residuals[2]


@pytest.mark.slow
@pytest.mark.parametrize("w", [TrigPolynomial(), TrigPolynomial.symmetric({1: 0.3})])
def test_perturbation_below_critical_decay(w: TrigPolynomial) -> None:
    scaled = {}
    for n in (10, 20, 40, 80):
        s = critical_s("pi/2", n)
        delta = abs(
            log_det(SymbolSpec(theta0="pi/2", s=s, W=w), n).ln_d
            - log_det(SymbolSpec(theta0="pi/2", s=0, W=w), n).ln_d
        )
        scaled[n] = delta * mp.sqrt(n)
    assert scaled[80] <= mpf("1.5") * scaled[10]
