import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from gaptlz.lib.matrix import SIGMA3, Matrix2C

TOL = mpf(10) ** -30

entries = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
matrices = st.tuples(entries, entries, entries, entries).map(
    lambda e: Matrix2C.of(((e[0], e[1]), (e[2], e[3])))
)


def test_constructors() -> None:
    with mp.workprec(128):
        m = Matrix2C(1, 2, 3, 4)
        assert m.rows() == ((1, 2), (3, 4))
        assert m.det() == -2
        assert Matrix2C.identity().is_close(Matrix2C.diag(1, 1), 0)
        assert Matrix2C.sigma3_power(2).entries() == (2, 0, 0, mpf(1) / 2)
        e = Matrix2C.exp_sigma3(mpc(0, 1))
        assert abs(e.a11 * e.a22 - 1) < TOL
        assert (Matrix2C.upper(5) @ Matrix2C.upper(-5)).is_close(Matrix2C.identity(), 0)
        assert (SIGMA3 @ SIGMA3).is_close(Matrix2C.identity(), 0)
        assert Matrix2C.lower(1j).transpose().is_close(Matrix2C.upper(1j), 0)
        assert Matrix2C.upper(1j).conj().a12 == -1j


def test_inverse() -> None:
    with mp.workprec(128):
        m = Matrix2C.of(((2, 1j), (0.5, 3)))
        assert (m @ m.inv()).is_close(Matrix2C.identity(), TOL)
        assert (2 * m).is_close(m + m, TOL)
        assert (m * 2 - m).is_close(m, TOL)
        assert abs(Matrix2C.identity().norm() - mp.sqrt(2)) < TOL
    with pytest.raises(ZeroDivisionError):
        Matrix2C(1, 2, 2, 4).inv()


@settings(deadline=None, max_examples=50)
@given(matrices, matrices, matrices)
def test_matrix_algebra(a: Matrix2C, b: Matrix2C, c: Matrix2C) -> None:
    with mp.workprec(128):
        tol = mpf(10) ** -25 * (1 + a.norm() * b.norm() * c.norm())
        assert ((a @ b) @ c).is_close(a @ (b @ c), tol)
        assert (a @ (b + c)).is_close(a @ b + a @ c, tol)
        assert abs((a @ b).det() - a.det() * b.det()) <= tol
        assert (a @ b).transpose().is_close(b.transpose() @ a.transpose(), tol)
