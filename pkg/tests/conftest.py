import pytest

from gaptlz.symbol import TrigPolynomial


@pytest.fixture(scope="session")
def w_pm1() -> TrigPolynomial:
    """W(z) = 0.3 (z + 1/z)"""
    return TrigPolynomial.symmetric({1: 0.3})
