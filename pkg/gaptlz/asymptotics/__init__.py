from .core import (
    ExpansionValue,
    critical_s,
    fisher_hartwig_expansion,
    geometric_tail_bound,
    large_y_expansion,
    mapped_w_coeffs,
    szego_expansion,
    theorem_error_envelope,
    widom_expansion,
    x_critical,
)
