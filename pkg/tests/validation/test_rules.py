from mpmath import mpf
from result import Err, Ok

from gaptlz.validation import Rule


def test_rule() -> None:
    # An individual rule: call -> `Result`
    is_small = Rule(lambda x: abs(x) < 1)
    assert is_small(mpf("0.5")) == Ok((is_small, mpf("0.5"), True))
    assert is_small(2) == Err((is_small, 2, False))

    # Exceptions are caught and returned in the `Err`
    res = is_small(None)
    assert isinstance(res, Err)
    assert isinstance(res.err_value[-1], TypeError)

    # An `Ok` source is unwrapped
    assert is_small(Ok(mpf("0.1"))) == Ok((is_small, mpf("0.1"), True))


def test_rule_at_key() -> None:
    report = {"residual": mpf(10) ** -12, "grid": {"n": [10, 20, 40]}}
    is_tiny = Rule(lambda x: x < mpf(10) ** -8, at_key="residual")
    three_points = Rule(lambda x: len(x) == 3, at_key="grid.n")

    assert is_tiny(report) == Ok((is_tiny, report["residual"], True))
    assert isinstance(three_points(report), Ok)
    assert isinstance(is_tiny({"residual": 1}), Err)
    # A missing key reads as None, which the predicate rejects
    assert isinstance(three_points({"grid": {}}), Err)
    # The key only applies to dicts
    assert isinstance(is_tiny(mpf(0)), Ok)


def test_rule_equality() -> None:
    def fn(x: int) -> bool:
        return x > 0

    assert Rule(fn, at_key="a") == Rule(fn, at_key="a")
    assert Rule(fn, at_key="a") != Rule(fn, at_key="b")
    assert len({Rule(fn), Rule(fn)}) == 1
    assert repr(Rule(fn, at_key="a", name="Positive")) == "<Rule Positive at a>"
