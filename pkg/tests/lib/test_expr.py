import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ValidationError

from gaptlz.lib import ScalarField, is_inf, parse_scalar, to_mp, to_mpf

TOL = mpf(10) ** -35


def test_parse_scalar() -> None:
    with mp.workprec(128):
        assert abs(parse_scalar("pi/2") - mp.pi / 2) < TOL
        assert abs(parse_scalar("pi*(1-2/50)") - mp.pi * mpf(48) / 50) < TOL
        assert abs(parse_scalar("-2*log(tan(pi/8))") - mpf("1.7627471740390860505")) < 1e-18
        assert abs(parse_scalar("exp(-2) + sqrt(4)**2") - (mp.exp(-2) + 4)) < TOL
        assert parse_scalar("inf") == mp.inf
        assert parse_scalar("1j") == mpc(0, 1)
        # Literals are read as decimals
        assert parse_scalar("0.1") == mpf("0.1")

    for bad in ("import os", "__import__('os')", "x + 1", "pi.real", "'a'", "True", "1 <", "[1]"):
        with pytest.raises(ValueError):
            parse_scalar(bad)


def test_to_mp() -> None:
    with mp.workprec(128):
        assert to_mp(3) == 3
        assert to_mp(0.3) == mpf("0.3")
        assert to_mp(complex(0.5, 0.25)) == mpc("0.5", "0.25")
        assert to_mp(mpf(2)) == 2
        assert to_mpf("pi") == +mp.pi
    with pytest.raises(ValueError):
        to_mp(True)
    with pytest.raises(ValueError):
        to_mp([1])
    with pytest.raises(ValueError):
        to_mpf(1j)


def test_is_inf() -> None:
    assert is_inf("inf")
    assert is_inf(float("inf"))
    assert is_inf(mp.inf)
    assert not is_inf(float("-inf"))
    assert not is_inf("1e300")
    assert not is_inf(None)


def test_scalar_field() -> None:
    class Point(BaseModel):
        x: ScalarField
        y: ScalarField = None

    p = Point(x="pi/3")
    # Kept as given, evaluated at whatever precision it is read at
    assert p.x == "pi/3"
    with mp.workprec(256):
        assert abs(to_mpf(p.x) - mp.pi / 3) < mpf(10) ** -70
    assert p.y is None
    with pytest.raises(ValidationError):
        Point(x="pi/")
    with pytest.raises(ValidationError):
        Point(x=[1, 2])


@given(st.integers(min_value=-(10**6), max_value=10**6), st.integers(1, 10**6))
def test_fraction_expressions(p: int, q: int) -> None:
    with mp.workprec(128):
        assert abs(parse_scalar(f"{p}/{q}") - mpf(p) / q) <= abs(mpf(p) / q) * TOL
        assert parse_scalar(f"-({p})") == -p
