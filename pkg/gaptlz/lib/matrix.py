from typing import Any

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict


class Matrix2C(BaseModel):
    """
    A 2x2 complex matrix [[a11, a12], [a21, a22]] of mpmath numbers.

    Supports `@` (matrix product), `+`, `-`, scalar `*`, `det`, `inv` and a few constructors
      for the diagonal/triangular shapes used by Riemann-Hilbert jump matrices.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a11: Any
    a12: Any
    a21: Any
    a22: Any

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        if args:
            kwargs.update(zip(("a11", "a12", "a21", "a22"), args))
        super().__init__(**kwargs)

    @classmethod
    def of(cls, rows: tuple[tuple[Any, Any], tuple[Any, Any]] | list[list[Any]]) -> "Matrix2C":
        (a11, a12), (a21, a22) = rows
        return cls(a11=mpc(a11), a12=mpc(a12), a21=mpc(a21), a22=mpc(a22))

    @classmethod
    def identity(cls) -> "Matrix2C":
        return cls.of(((1, 0), (0, 1)))

    @classmethod
    def diag(cls, d1: Any, d2: Any) -> "Matrix2C":
        return cls.of(((d1, 0), (0, d2)))

    @classmethod
    def sigma3_power(cls, c: Any) -> "Matrix2C":
        """c^{σ3} = diag(c, 1/c) for an already chosen branch of c."""
        return cls.diag(c, 1 / c)

    @classmethod
    def exp_sigma3(cls, h: Any) -> "Matrix2C":
        """e^{hσ3}"""
        return cls.diag(mp.exp(h), mp.exp(-h))

    @classmethod
    def upper(cls, x: Any) -> "Matrix2C":
        return cls.of(((1, x), (0, 1)))

    @classmethod
    def lower(cls, x: Any) -> "Matrix2C":
        return cls.of(((1, 0), (x, 1)))

    def rows(self) -> tuple[tuple[Any, Any], tuple[Any, Any]]:
        return ((self.a11, self.a12), (self.a21, self.a22))

    def entries(self) -> tuple[Any, Any, Any, Any]:
        return (self.a11, self.a12, self.a21, self.a22)

    def __matmul__(self, other: "Matrix2C") -> "Matrix2C":
        return Matrix2C(
            a11=self.a11 * other.a11 + self.a12 * other.a21,
            a12=self.a11 * other.a12 + self.a12 * other.a22,
            a21=self.a21 * other.a11 + self.a22 * other.a21,
            a22=self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __add__(self, other: "Matrix2C") -> "Matrix2C":
        return Matrix2C(*_zip(self, other, lambda x, y: x + y))

    def __sub__(self, other: "Matrix2C") -> "Matrix2C":
        return Matrix2C(*_zip(self, other, lambda x, y: x - y))

    def __mul__(self, c: Any) -> "Matrix2C":
        return Matrix2C(a11=c * self.a11, a12=c * self.a12, a21=c * self.a21, a22=c * self.a22)

    __rmul__ = __mul__

    def det(self) -> Any:
        return self.a11 * self.a22 - self.a12 * self.a21

    def inv(self) -> "Matrix2C":
        d = self.det()
        if d == 0:
            raise ZeroDivisionError("Matrix2C is singular")
        return Matrix2C(a11=self.a22 / d, a12=-self.a12 / d, a21=-self.a21 / d, a22=self.a11 / d)

    def conj(self) -> "Matrix2C":
        """Entrywise complex conjugate."""
        return Matrix2C(*(mp.conj(x) for x in self.entries()))

    def transpose(self) -> "Matrix2C":
        return Matrix2C(a11=self.a11, a12=self.a21, a21=self.a12, a22=self.a22)

    def norm(self) -> mpf:
        """Frobenius norm."""
        return mp.sqrt(mp.fsum(abs(x) ** 2 for x in self.entries()))

    def distance(self, other: "Matrix2C") -> mpf:
        return (self - other).norm()

    def is_close(self, other: "Matrix2C", tol: Any) -> bool:
        return self.distance(other) <= tol


def _zip(m1: Matrix2C, m2: Matrix2C, op: Any) -> list[Any]:
    return [op(x, y) for x, y in zip(m1.entries(), m2.entries())]


SIGMA3 = Matrix2C.diag(1, -1)
