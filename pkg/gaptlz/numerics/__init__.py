from .extrapolation import neville
from .precision import (
    DEFAULT_PRECISION,
    PRECISION_ENV_VAR,
    VALIDATION_EXTRA_BITS,
    auto_precision,
    resolve_precision,
    working_precision,
)
from .quadrature import (
    QuadratureRule,
    endpoint_integrate,
    gauss_legendre,
    graded_breaks,
    panel_integrate,
)
from .roots import bisect
from .special import bessel0, ln_barnes_g, widom_constant, zeta_prime_at_minus_one
