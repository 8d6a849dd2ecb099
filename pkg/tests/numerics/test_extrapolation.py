import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpf

from gaptlz.numerics import neville


def test_neville_reproduces_polynomials() -> None:
    with mp.workprec(128):
        xs = [mpf(10) ** -k for k in range(4, 8)]
        ys = [3 - 2 * x + 5 * x**3 for x in xs]
        assert abs(neville(xs, ys) - 3) < mpf(10) ** -30
        assert abs(neville(xs, ys, at=1) - 6) < mpf(10) ** -10


@given(st.floats(min_value=-5, max_value=5, allow_nan=False))
def test_neville_constant(c: float) -> None:
    with mp.workprec(64):
        assert abs(neville([mpf(1), mpf(2), mpf(3)], [mpf(c)] * 3) - c) < 1e-12


def test_neville_complex_values() -> None:
    with mp.workprec(128):
        xs = [mpf(1) / 2**k for k in range(1, 6)]
        ys = [mp.expj(x) for x in xs]
        assert abs(neville(xs, ys) - 1) < mpf(10) ** -6


def test_neville_rejects_mismatch() -> None:
    with pytest.raises(ValueError):
        neville([1, 2], [1])
