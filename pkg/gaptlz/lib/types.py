from enum import Enum
from typing import TypeAlias

from mpmath import mpc, mpf

# Anything `to_mp` accepts: python numbers, mpmath numbers, or an expression like "pi/2"
Scalar: TypeAlias = int | float | complex | str | mpf | mpc


class Regime(str, Enum):
    """
    Which of the three shapes the equilibrium measure takes for the two-level field:

    - ONE_ARC:  x > x_c, support is the arc γ itself
    - CRITICAL: x = x_c, same measure, but the variational inequality touches at -1
    - TWO_ARC:  x < x_c, a second arc around -1 opens up
    """

    ONE_ARC = "one_arc"
    CRITICAL = "critical"
    TWO_ARC = "two_arc"


class BesselKind(str, Enum):
    I = "I"
    K = "K"
    H1 = "H1"
    H2 = "H2"
    I_PRIME = "I'"
    K_PRIME = "K'"
    H1_PRIME = "H1'"
    H2_PRIME = "H2'"


class Side(str, Enum):
    """
    Boundary side of an oriented contour. PLUS is the left side of the orientation,
      which for the unit circle (counterclockwise) is the inside.
    """

    PLUS = "+"
    MINUS = "-"


class LocalPoint(str, Enum):
    Z0 = "z0"
    ZBAR0 = "zbar0"
    MINUS1 = "minus1"


class JumpObject(str, Enum):
    S = "S-jump"
    P = "P-jump"
    PSI = "Psi-jump"
    PSI_HAT = "PsiHat-jump"
    P_INF = "Pinf-jump"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class Contour(str, Enum):
    """
    Pieces of the jump contour of the opened-lens problem: the arc γ = {|θ| < θ0}, the gap
      arc of the circle through -1, and the two lenses around γ.
    """

    ARC = "arc"
    GAP = "gap"
    LENS = "lens"
