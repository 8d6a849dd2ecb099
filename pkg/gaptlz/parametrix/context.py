import logging
from typing import Any

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..asymptotics import x_critical
from ..errors import OutsideDisk
from ..lib.expr import ScalarField, is_inf, to_mpf
from ..lib.types import LocalPoint
from ..symbol import TrigPolynomial

logger = logging.getLogger(__name__)

DEFAULT_DISK_FRACTION = 0.4
DISK_SLACK = mpf(2) ** -32
# Lens bulge as a fraction of the disk radius when no lens_offset is given
DEFAULT_LENS_FRACTION = mpf(1) / 2


class ParametrixContext(BaseModel):
    """
    Everything the parametrices of the opened-lens problem depend on: the arc γ = {|θ| < θ0},
      the smooth part W of the symbol, the degree n and the gap rate x >= x_c ("inf" for the
      arc-supported symbol).

    The local disks around z0, z̄0 and -1 have radius r = δ·min(sin θ0, cos(θ0/2)) unless
      `disk_radius` is given; r < min(sin θ0, cos(θ0/2)) keeps the three disks disjoint
      and r shrinks like (π - θ0) as the gap closes. The lenses are circular arcs through
      z0 and z̄0 crossing the real axis at 1 ∓ `lens_offset`.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    theta0: ScalarField
    n: int = Field(ge=1)
    x: ScalarField = "inf"
    w: TrigPolynomial = Field(default_factory=TrigPolynomial, alias="W")
    disk_fraction: float = Field(default=DEFAULT_DISK_FRACTION, gt=0, lt=1)
    disk_radius: ScalarField = None
    lens_offset: ScalarField = None

    @model_validator(mode="after")
    def _check(self) -> "ParametrixContext":
        with mp.workprec(64):
            theta0 = to_mpf(self.theta0)
            if not 0 < theta0 < mp.pi:
                raise ValueError(f"theta0 must lie in (0, π), got {self.theta0!r}")
            if not is_inf(self.x):
                x, x_c = to_mpf(self.x), x_critical(theta0, 64)
                if x < x_c * (1 - mpf(2) ** -40):
                    raise ValueError(
                        f"The parametrices need x >= x_c = {mp.nstr(x_c, 10)}, got {self.x!r}"
                    )
            if self.disk_radius is not None:
                r = to_mpf(self.disk_radius)
                if not 0 < r < _max_radius(theta0):
                    raise ValueError(
                        f"disk_radius must lie in (0, {mp.nstr(_max_radius(theta0), 8)}) for "
                        f"disjoint disks, got {self.disk_radius!r}"
                    )
            if self.lens_offset is not None and not 0 < to_mpf(self.lens_offset) < 1:
                raise ValueError(f"lens_offset must lie in (0, 1), got {self.lens_offset!r}")
        return self

    def theta0_value(self) -> mpf:
        return to_mpf(self.theta0)

    def x_value(self) -> mpf:
        return mp.inf if is_inf(self.x) else to_mpf(self.x)

    def nx(self) -> mpf:
        return self.n * self.x_value()

    def x_c(self) -> mpf:
        return x_critical(self.theta0_value(), mp.prec)

    def z0(self) -> mpc:
        return mp.expj(self.theta0_value())

    def radius(self) -> mpf:
        if self.disk_radius is not None:
            return to_mpf(self.disk_radius)
        return self.disk_fraction * _max_radius(self.theta0_value())

    def lens_bulge(self) -> mpf:
        if self.lens_offset is not None:
            return to_mpf(self.lens_offset)
        return DEFAULT_LENS_FRACTION * self.radius()

    def center(self, which: LocalPoint | str) -> Any:
        match LocalPoint(which):
            case LocalPoint.Z0:
                return self.z0()
            case LocalPoint.ZBAR0:
                return mp.conj(self.z0())
            case LocalPoint.MINUS1:
                return mpf(-1)

    def locate(self, z: Any) -> LocalPoint | None:
        """The local disk containing z, if any."""
        r = self.radius()
        for which in LocalPoint:
            if abs(z - self.center(which)) < r:
                return which
        return None

    def check_in_disk(self, z: Any, which: LocalPoint | str) -> None:
        which = LocalPoint(which)
        distance = abs(z - self.center(which))
        # Closed disk, so matching points on the boundary circle are accepted
        if distance > self.radius() * (1 + DISK_SLACK):
            raise OutsideDisk(
                f"z={mp.nstr(z, 10)} is at distance {mp.nstr(distance, 6)} from the center of "
                f"the {which.value} disk of radius {mp.nstr(self.radius(), 6)}"
            )


def _max_radius(theta0: Any) -> Any:
    # Half the distances |z0 - z̄0| = 2 sin θ0 and |z0 + 1| = 2 cos(θ0/2)
    return min(mp.sin(theta0), mp.cos(theta0 / 2))
