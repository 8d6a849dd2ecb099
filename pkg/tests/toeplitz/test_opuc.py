import pytest
from mpmath import mp, mpc, mpf

from gaptlz.errors import DomainError, OnContour
from gaptlz.lib.matrix import Matrix2C
from gaptlz.lib.types import Side
from gaptlz.symbol import SymbolSpec, TrigPolynomial, symbol_eval
from gaptlz.toeplitz import cd_residual, opuc, orthonormality_residual, y_matrix

TOL = mpf(10) ** -25


def _s_crit(theta0: mpf, n: int) -> mpf:
    return mp.exp(2 * n * mp.log(mp.tan(theta0 / 4)))


def test_opuc_flat_symbol() -> None:
    data = opuc(SymbolSpec(theta0="pi/2", s=1), 5, 128)
    with mp.workprec(128):
        assert abs(data.chi_n - 1) < TOL
        assert abs(data.phi_n_coeffs[-1] - 1) < TOL
        assert all(abs(c) < TOL for c in data.phi_n_coeffs[:-1])
        assert abs(data.phi_n(mpf("0.5")) - mpf("0.5") ** 5) < TOL


def test_opuc_degree_one() -> None:
    data = opuc(SymbolSpec(theta0="pi/2", s=0), 1, 128)
    with mp.workprec(128):
        d1, d2 = mpf(1) / 2, mpf(1) / 4 - 1 / mp.pi**2
        assert abs(data.chi_n - mp.sqrt(d1 / d2)) < TOL
        assert abs(data.chi_nm1 - mp.sqrt(2)) < TOL
        monic = data.monic_p_n()
        assert abs(monic[0] + 2 / mp.pi) < TOL
        assert abs(monic[1] - 1) < TOL
        assert abs(data.y12_at_0 - data.chi_n**-2) < TOL


def test_orthonormality_residual(w_pm1: TrigPolynomial) -> None:
    with mp.workprec(192):
        theta0 = mp.pi / 2
        spec = SymbolSpec(theta0="pi/2", s=_s_crit(theta0, 6))
    assert orthonormality_residual(spec, 6, 192) < mpf(10) ** -20
    assert orthonormality_residual(spec, 6, 192, method="moments") < mpf(10) ** -40

    spec = SymbolSpec(theta0="2*pi/5", s="0.3", W=w_pm1)
    assert orthonormality_residual(spec, 4, 128) < mpf(10) ** -25


def test_y_matrix_determinant() -> None:
    spec = SymbolSpec(theta0="pi/2", s="0.1")
    with mp.workprec(128):
        points = [mpf("0.5"), mpc("0.2", "-0.1"), mpc("2.5", "1"), 0.9 * mp.expj(0.3)]
        points.append(mpf("1.1") * mp.expj(2))
        for z in points:
            y = y_matrix(spec, 4, z, 128)
            assert abs(y.det() - 1) < mpf(10) ** -15


def test_y_matrix_normalization() -> None:
    spec = SymbolSpec(theta0="2*pi/5", s="0.1")
    with mp.workprec(128):
        errors, errors_22 = [], []
        for r in (10, 100):
            y = y_matrix(spec, 4, r, 128)
            errors.append(abs(y.a11 / mpf(r) ** 4 - 1))
            # Y_22 z^n -> 1 as well
            errors_22.append(abs(y.a22 * mpf(r) ** 4 - 1))
        assert errors[1] < errors[0] / 5
        assert errors_22[1] < errors_22[0] / 5

    spec = SymbolSpec(theta0="pi/2", s="0.1")
    with mp.workprec(128):
        y0 = y_matrix(spec, 4, 0, 128)
        assert abs(y0.a12 - opuc(spec, 4, 128).chi_n ** -2) < TOL


def test_y_matrix_jump(w_pm1: TrigPolynomial) -> None:
    for w in (TrigPolynomial(), w_pm1):
        spec = SymbolSpec(theta0="pi/2", s="0.1", W=w)
        with mp.workprec(128):
            for theta in (mpf("0.3"), mpf(2)):
                z = mp.expj(theta)
                plus = y_matrix(spec, 3, z, 128, side=Side.PLUS)
                minus = y_matrix(spec, 3, z, 128, side=Side.MINUS)
                jump = Matrix2C.upper(mp.power(z, -3) * symbol_eval(spec, theta, 128))
                assert plus.is_close(minus @ jump, TOL)

    with pytest.raises(OnContour):
        y_matrix(spec, 3, mp.expj(0.3), 128)


def test_y_matrix_boundary_value_limit() -> None:
    spec = SymbolSpec(theta0="pi/2", s="0.1")
    with mp.workprec(128):
        z = mp.expj(mpf("0.3"))
        plus = y_matrix(spec, 3, z, 128, side="+")
        near = y_matrix(spec, 3, (1 - mpf(10) ** -6) * z, 128)
        assert plus.distance(near) < mpf(10) ** -4


def test_cd_residual() -> None:
    spec = SymbolSpec(theta0="pi/2", s="0.2")
    assert cd_residual(spec, 4, mpc("0.7", "0.1"), 192) < TOL
    with mp.workprec(192):
        assert cd_residual(spec, 4, mp.expj(mpf("0.3")), 192) < TOL
    assert cd_residual(spec, 1, mpc("0.4", "0.3"), 128) < mpf(10) ** -30

    with pytest.raises(DomainError):
        cd_residual(SymbolSpec(theta0="pi/2", s="0.2", W={"1": 0.1, "-1": 0.1}), 4, 0.5)
