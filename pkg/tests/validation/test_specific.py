from mpmath import mp, mpc, mpf
from result import Err, Ok

from gaptlz.validation import AtLeast, AtMost, CloseTo, Decreasing, IsFinite, Rule


def test_is_finite() -> None:
    is_finite = IsFinite()
    assert isinstance(is_finite(mpf("1.5")), Ok)
    assert isinstance(is_finite(mpc(1, 2)), Ok)
    assert isinstance(is_finite(mp.inf), Err)
    assert isinstance(is_finite(mp.nan), Err)
    assert isinstance(is_finite(None), Err)


def test_bounds() -> None:
    assert isinstance(AtMost("1e-8")(mpf(10) ** -9), Ok)
    assert isinstance(AtMost("1e-8")(mpf(10) ** -7), Err)
    assert isinstance(AtLeast(0)(mpf(0)), Ok)
    assert isinstance(AtLeast(0)(-(mpf(10) ** -30)), Err)
    assert isinstance(AtLeast("-1e-9")(-(mpf(10) ** -12)), Ok)
    # A complex value with zero imaginary part is compared as real
    assert isinstance(AtMost(1)(mpc("0.5", 0)), Ok)
    assert isinstance(AtMost(1)(mpc("0.5", 1)), Err)


def test_close_to() -> None:
    assert isinstance(CloseTo(1, "1e-6")(mpf(1) + mpf(10) ** -7), Ok)
    assert isinstance(CloseTo(1, "1e-6")(mpf(1) + mpf(10) ** -5), Err)
    assert isinstance(CloseTo(100, "1e-6", relative=True)(100 + mpf(10) ** -5), Ok)
    assert isinstance(CloseTo("pi", "1e-20")(+mp.pi), Ok)


def test_decreasing() -> None:
    assert isinstance(Decreasing()([3, 2, 1]), Ok)
    assert isinstance(Decreasing()([3, 3, 1]), Err)
    assert isinstance(Decreasing()([-3, 2, -1]), Ok)
    assert isinstance(Decreasing(absolute=False)([-3, 2, -1]), Err)
    # Halving (within 25%) when n doubles
    assert isinstance(Decreasing("0.625")([mpf(8), mpf(4), mpf("2.1")]), Ok)
    assert isinstance(Decreasing("0.625")([mpf(8), mpf(6)]), Err)
    assert isinstance(Decreasing()([]), Ok)


def test_names() -> None:
    assert AtMost("1e-8").name == "AtMost(1e-8)"
    assert "Decreasing" in repr(Decreasing(at_key="delta"))
    assert Rule(abs).name == "abs"
