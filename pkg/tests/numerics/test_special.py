import pytest
from mpmath import mp, mpc, mpf

from gaptlz.errors import DomainError, PoleError
from gaptlz.lib.types import BesselKind
from gaptlz.numerics import (
    bessel0,
    ln_barnes_g,
    panel_integrate,
    widom_constant,
    zeta_prime_at_minus_one,
)


def test_bessel0_values() -> None:
    assert bessel0(BesselKind.I, 0) == 1
    assert bessel0("I'", 0) == 0
    with mp.workprec(128):
        # K0(2) = ∫_0^∞ e^{-2 cosh t} dt, truncated where the integrand is below 1e-60
        oracle = panel_integrate(lambda t: mp.exp(-2 * mp.cosh(t)), [0, 6], precision=128)
        assert abs(bessel0(BesselKind.K, 2, 128) - oracle) < mpf(10) ** -30

    for kind in (BesselKind.K, BesselKind.H1, BesselKind.H2, BesselKind.K_PRIME):
        with pytest.raises(DomainError):
            bessel0(kind, 0)


def test_bessel0_wronskians() -> None:
    with mp.workprec(128):
        x = mpf("1.7")
        w = bessel0("I", x, 128) * bessel0("K'", x, 128) - bessel0("I'", x, 128) * bessel0(
            "K", x, 128
        )
        assert abs(w + 1 / x) < mpf(10) ** -20

        # Log-spaced grid, complex arguments: I0 K0' - I0' K0 = -1/z and
        #   H1 H2' - H1' H2 = -4i/(π z)
        tol = mpf(2) ** (-0.25 * 128)
        for j in range(-3, 4):
            z = mpc(2) ** j * mp.expjpi(mpf("0.3"))
            w = bessel0("I", z, 128) * bessel0("K'", z, 128) - bessel0("I'", z, 128) * bessel0(
                "K", z, 128
            )
            assert abs(w + 1 / z) < tol
            w = bessel0("H1", z, 128) * bessel0("H2'", z, 128) - bessel0(
                "H1'", z, 128
            ) * bessel0("H2", z, 128)
            assert abs(w + 4j / (mp.pi * z)) < tol


def test_ln_barnes_g() -> None:
    assert ln_barnes_g(0) == 0
    assert abs(ln_barnes_g(1, 128)) < mpf(10) ** -35
    with mp.workprec(128):
        # G(4) = Γ(1)Γ(2)Γ(3) = 2
        assert abs(ln_barnes_g(3, 128) - mp.log(2)) < mpf(10) ** -35
        for z in (mpf("0.3"), mpc("0.2", "0.9"), mpc("-0.4", "1.7"), mpc(0, 3)):
            assert abs(mp.exp(ln_barnes_g(z, 128)) - mp.barnesg(1 + z)) < mpf(10) ** -25

    with pytest.raises(PoleError):
        ln_barnes_g(-1)
    with pytest.raises(PoleError):
        ln_barnes_g(-3)


def test_ln_barnes_g_imaginary_pair() -> None:
    with mp.workprec(256):
        t = mpf("0.2")
        value = ln_barnes_g(mpc(0, t), 256) + ln_barnes_g(mpc(0, -t), 256)
        assert abs(mp.im(value)) < mpf(10) ** -60

        # Even part of the Taylor series of ln G(1+z), doubled, at z = it
        series = (1 + mp.euler) * t**2
        for k in range(3, 400, 2):
            series -= 2 * mp.zeta(k) * (-1) ** ((k + 1) // 2) * t ** (k + 1) / (k + 1)
        assert abs(value - series) < mpf(10) ** -60
        assert abs(value - mp.log(mp.barnesg(1 + 1j * t) * mp.barnesg(1 - 1j * t))) < mpf(
            10
        ) ** -60


def test_zeta_prime_and_constant() -> None:
    zp = zeta_prime_at_minus_one(128)
    assert zp < 0
    assert abs(zp - mpf("-0.1654211437")) < mpf(10) ** -9
    with mp.workprec(128):
        assert abs(zp - (mpf(1) / 12 - mp.log(mp.glaisher))) < mpf(10) ** -35
        doubled = zeta_prime_at_minus_one(256)
        assert abs(doubled - zp) < mpf(2) ** -(128 - 4)

    c = widom_constant(128)
    assert abs(c - mpf("-0.4385011")) < mpf(10) ** -7
