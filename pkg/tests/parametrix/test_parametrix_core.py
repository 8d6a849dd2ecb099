import pytest
from mpmath import mp, mpc, mpf

from gaptlz.asymptotics import x_critical
from gaptlz.equilibrium import ell_closed_form
from gaptlz.errors import (
    BranchAmbiguity,
    DomainError,
    OnContour,
    OutsideDisk,
    OutsideGap,
    PathCrossesCut,
    PoleError,
)
from gaptlz.lib.types import Contour, LocalPoint
from gaptlz.numerics import neville
from gaptlz.parametrix import (
    ParametrixContext,
    branch_root,
    conformal_map_zeta,
    extrapolated_jump_residual,
    g_function,
    global_parametrix,
    h_infinity,
    jump_residual,
    lens_points,
    phi_function,
    phi_on_gap,
    s_jump_matrix,
    szego_h,
    zeta_preimage,
)
from gaptlz.symbol import TrigPolynomial

BITS = 96
# x_c for θ0 = π/2, as an expression so it is exact at any precision
X_C = "-2*log(tan(pi/8))"


@pytest.fixture(scope="module")
def ctx() -> ParametrixContext:
    return ParametrixContext(theta0="pi/2", n=10)


@pytest.fixture(scope="module")
def ctx_w(w_pm1: TrigPolynomial) -> ParametrixContext:
    return ParametrixContext(theta0="pi/2", n=10, W=w_pm1)


def test_context() -> None:
    ctx = ParametrixContext(theta0="pi/2", n=3, x=X_C)
    with mp.workprec(BITS):
        assert abs(ctx.radius() - mpf(0.4) * mp.cos(mp.pi / 4)) < mpf(10) ** -25
        assert abs(ctx.x_c() - x_critical("pi/2", BITS)) < mpf(10) ** -25
        assert ctx.nx() == 3 * ctx.x_value()
        assert ctx.lens_bulge() == ctx.radius() / 2

        assert ctx.locate(ctx.z0() + mpf("0.01")) == LocalPoint.Z0
        assert ctx.locate(mp.conj(ctx.z0()) * mpf("1.01")) == LocalPoint.ZBAR0
        assert ctx.locate(mpc("-0.99", "0.01")) == LocalPoint.MINUS1
        assert ctx.locate(2) is None
        with pytest.raises(OutsideDisk):
            ctx.check_in_disk(mpf(2), "z0")
        # The boundary circle belongs to the disk
        ctx.check_in_disk(-1 + ctx.radius(), LocalPoint.MINUS1)

    assert ParametrixContext(theta0=1, n=1).x_value() == mp.inf
    assert ParametrixContext(theta0=1, n=2, W={"1": 0.3}).w.degree == 1
    assert ParametrixContext(theta0=1, n=2, disk_radius="0.1").radius() == mpf("0.1")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"theta0": 0, "n": 1},
        {"theta0": "pi", "n": 1},
        {"theta0": 1, "n": 0},
        {"theta0": "pi/2", "n": 1, "x": 1},
        {"theta0": "pi/2", "n": 1, "disk_radius": "0.8"},
        {"theta0": "pi/2", "n": 1, "lens_offset": 1},
        {"theta0": "pi/2", "n": 1, "disk_fraction": 1.5},
    ],
)
def test_context_validation(kwargs: dict) -> None:
    with pytest.raises(ValueError):
        ParametrixContext(**kwargs)


def test_branch_root(ctx: ParametrixContext) -> None:
    with mp.workprec(BITS):
        assert abs(branch_root(ctx, 0, BITS) + 1) < mpf(10) ** -25
        big = mpf(10) ** 8
        assert abs(branch_root(ctx, big, BITS) / big - 1) < mpf(10) ** -7
        # Boundary value from inside the circle
        theta = mpf("0.4")
        inside = branch_root(ctx, mp.expj(theta) * (1 - mpf(10) ** -20), BITS)
        expected = -mp.expj(theta / 2) * mp.sqrt(2 * mp.cos(theta))
        assert abs(inside - expected) < mpf(10) ** -8


def test_g_function(ctx: ParametrixContext) -> None:
    with mp.workprec(BITS):
        assert abs(g_function(ctx, 0, BITS) - mpc(0, mp.pi)) < mpf(10) ** -25
        errors = [abs(g_function(ctx, r, BITS) - mp.log(r)) for r in (10, 100, 1000)]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < mpf(10) ** -2

        # The inside and outside representations agree across the gap
        alpha = mpf(2)
        inner = g_function(ctx, mp.expj(alpha) * (1 - mpf(10) ** -7), BITS)
        outer = g_function(ctx, mp.expj(alpha) * (1 + mpf(10) ** -7), BITS)
        assert abs(inner - outer) < mpf(10) ** -5

    with pytest.raises(BranchAmbiguity):
        g_function(ctx, 1)
    with pytest.raises(BranchAmbiguity):
        g_function(ctx, mp.expj(mpf("0.1")) * (1 + mpf(10) ** -9))


def test_phi_function(ctx: ParametrixContext) -> None:
    with mp.workprec(BITS):
        assert phi_function(ctx, ctx.z0(), BITS) == 0
        assert phi_function(ctx, mp.conj(ctx.z0()), BITS) == 0
        at_minus1 = phi_function(ctx, -1, BITS)
        assert abs(at_minus1.real - x_critical("pi/2", BITS)) < mpf(10) ** -10
        assert abs(at_minus1.real - mpf("1.762747")) < mpf(10) ** -6

        ell = ell_closed_form("pi/2", BITS)
        two_pi_i = mpc(0, 2 * mp.pi)
        # log z with arg z in [0, 2π)
        points = [
            (mpf("1.3") * mp.expj(mpf("0.2")), 0),
            (mpf("0.6") * mp.expj(mpf(2)), 0),
            (mpf("1.2") * mp.expj(mpf(-2)), two_pi_i),
        ]
        for z, shift in points:
            formula = 2 * g_function(ctx, z, BITS) - (mp.log(z) + shift) - mpc(0, mp.pi) + ell
            assert abs(phi_function(ctx, z, BITS) - formula) < mpf(10) ** -10

    with pytest.raises(PoleError):
        phi_function(ctx, 0)
    with mp.workprec(BITS), pytest.raises(PathCrossesCut):
        phi_function(ctx, mp.expj(mpf("0.3")), BITS)


def test_phi_on_gap(ctx: ParametrixContext) -> None:
    with mp.workprec(BITS):
        x_c = x_critical("pi/2", BITS)
        assert abs(phi_on_gap(ctx, mp.pi, BITS) - x_c) < mpf(10) ** -25
        assert phi_on_gap(ctx, mp.pi / 2, BITS) < mpf(10) ** -12

        path = phi_function(ctx, mp.expj(mpf(2)), BITS)
        assert abs(path - phi_on_gap(ctx, 2, BITS)) < mpf(10) ** -12

        grid = [mp.pi / 2 + mp.pi * j / 40 for j in range(1, 40)]
        values = [phi_on_gap(ctx, a, BITS) for a in grid]
        assert all(v <= x_c + mpf(10) ** -25 for v in values)
        assert max(values) == values[19]
        # -α and α give the same value on the circle
        assert abs(phi_on_gap(ctx, -2, BITS) - phi_on_gap(ctx, 2, BITS)) < mpf(10) ** -25

    with pytest.raises(OutsideGap):
        phi_on_gap(ctx, "0.5")


def test_szego_h(ctx: ParametrixContext, ctx_w: ParametrixContext) -> None:
    with mp.workprec(BITS):
        assert szego_h(ctx, mpc(0.3, 0.2), BITS) == 0
        assert h_infinity(ctx, BITS) == 0

        z = mp.expj(mpf("0.4") * mp.pi / 2)
        w = ctx_w.w.value(z)

        def defect(d):
            # The + side of γ is the inside of the circle
            return szego_h(ctx_w, z * (1 - d), BITS) + szego_h(ctx_w, z * (1 + d), BITS) - w

        assert abs(defect(mpf(10) ** -6)) < mpf(10) ** -4
        offsets = [mpf(10) ** -k for k in range(4, 8)]
        assert abs(neville(offsets, [defect(d) for d in offsets])) < mpf(10) ** -8

        # h tends to W(z0)/2 at the endpoint
        z0 = ctx_w.z0()
        half = ctx_w.w.value(z0) / 2
        far = abs(szego_h(ctx_w, z0 * (1 + mpf(10) ** -2), BITS) - half)
        near = abs(szego_h(ctx_w, z0 * (1 + mpf(10) ** -6), BITS) - half)
        assert near < far
        assert near < mpf(10) ** -2
        assert abs(szego_h(ctx_w, z0 * (1 - mpf(10) ** -6), BITS) - half) < mpf(10) ** -2

        far_z = mpf(10) ** 6
        assert abs(szego_h(ctx_w, far_z, BITS) - h_infinity(ctx_w, BITS)) < mpf(10) ** -5

    with pytest.raises(OnContour):
        szego_h(ctx_w, 1)


def test_global_parametrix(ctx_w: ParametrixContext) -> None:
    with mp.workprec(BITS):
        p = global_parametrix(ctx_w, mpc(0, 2), BITS)
        assert abs(p.det() - 1) < mpf(10) ** -20
        far = global_parametrix(ctx_w, mpf(10) ** 6, BITS)
        assert (far - far.identity()).norm() < mpf(10) ** -5

        mid_arc = mp.expj(mpf("0.3"))
        assert jump_residual(ctx_w, "Pinf-jump", mid_arc, mpf(10) ** -6, BITS) < mpf(10) ** -3
        assert extrapolated_jump_residual(ctx_w, "Pinf-jump", mid_arc, precision=BITS) < (
            mpf(10) ** -8
        )

    with mp.workprec(BITS), pytest.raises(OnContour):
        global_parametrix(ctx_w, mp.expj(mpf("0.3")), BITS)
    with pytest.raises(DomainError):
        jump_residual(ctx_w, "Pinf-jump", 2, "1e-6")
    with pytest.raises(ValueError):
        jump_residual(ctx_w, "Pinf-jump", 1, 0)


def test_s_jump_matrix() -> None:
    ctx = ParametrixContext(theta0="pi/2", n=20, x=X_C)
    with mp.workprec(BITS):
        x_c = x_critical("pi/2", BITS)
        point = mp.expj(mpf("0.9") * mp.pi)
        jump = s_jump_matrix(ctx, point, Contour.GAP, BITS)
        expected = mp.exp(20 * (phi_on_gap(ctx, mpf("0.9") * mp.pi, BITS) - x_c))
        assert abs(jump.a12 - expected) < mpf(10) ** -20
        assert expected < 1
        residual = jump_residual(ctx, "S-jump", point, "1e-6", BITS)
        assert abs(residual - expected) < mpf(10) ** -20
        further = jump_residual(ctx, "S-jump", mp.expj(mpf("0.8") * mp.pi), "1e-6", BITS)
        assert further < residual
        # At -1 the jump does not decay
        assert abs(jump_residual(ctx, "S-jump", -1, "1e-6", BITS) - 1) < mpf(10) ** -20

        arc = s_jump_matrix(ctx, mp.expj(mpf("0.3")), "arc", BITS)
        assert abs(arc.det() - 1) < mpf(10) ** -25
        lens = lens_points(ctx, "+", 3, BITS)[1]
        assert abs(s_jump_matrix(ctx, lens, "lens", BITS).a21) < 1

    with pytest.raises(DomainError):
        s_jump_matrix(ctx, 2, "arc")
    with pytest.raises(DomainError):
        s_jump_matrix(ctx, mpc(0.5, 0.5), "gap")
    with pytest.raises(DomainError):
        s_jump_matrix(ctx, 1j, "lens")

    unreachable = ParametrixContext(theta0="pi/2", n=20)
    gap = s_jump_matrix(unreachable, -1, "gap")
    assert gap == gap.identity()


def test_lens_points(ctx: ParametrixContext) -> None:
    with mp.workprec(BITS):
        z0 = ctx.z0()
        for side in ("+", "-"):
            points = lens_points(ctx, side, 8, BITS)
            assert len(points) == 8
            assert abs(points[0] - z0) < abs(points[-1] - z0)
            for z in points:
                assert (abs(z) < 1) == (side == "+")
                assert phi_function(ctx, z, BITS).real > 0
        crossing = lens_points(ctx, "-", 1, BITS)[0]
        assert abs(crossing - (1 + ctx.lens_bulge())) < mpf(10) ** -20

    with pytest.raises(ValueError):
        lens_points(ctx, "+", 0)


def test_conformal_map_zeta(ctx: ParametrixContext) -> None:
    with mp.workprec(BITS):
        z0, r = ctx.z0(), ctx.radius()
        assert conformal_map_zeta(ctx, z0, BITS) == 0
        step = mpc(0, 1) * z0 * mpf(10) ** -8
        slope = conformal_map_zeta(ctx, z0 + step, BITS) / step
        assert abs(slope) > mpf(10) ** -2

        mesh = [
            z0 + r / 2 * mpf(k) / 3 * mp.expj(2 * mp.pi * j / 8 + mpf("0.1"))
            for k in (1, 2, 3)
            for j in range(8)
        ]
        values = [conformal_map_zeta(ctx, z, BITS) for z in mesh]
        for i, u in enumerate(values):
            for v in values[i + 1 :]:
                assert abs(u - v) > mpf(10) ** -6

        # γ goes to the negative axis and the gap to the positive one
        below = conformal_map_zeta(ctx, z0 * mp.expj(-r / 4) * (1 - mpf(10) ** -12), BITS)
        above = conformal_map_zeta(ctx, z0 * mp.expj(r / 4), BITS)
        assert below.real < 0 and abs(below.imag) < mpf(10) ** -8
        assert above.real > 0 and abs(above.imag) < mpf(10) ** -15

        z = z0 + mpf("0.05") * mp.expj(mp.pi / 2 + mpf("0.5"))
        back = zeta_preimage(ctx, conformal_map_zeta(ctx, z, BITS), BITS)
        assert abs(back - z) < mpf(10) ** -12
        assert zeta_preimage(ctx, 0, BITS) == z0

    with pytest.raises(OutsideDisk):
        conformal_map_zeta(ctx, -1)
