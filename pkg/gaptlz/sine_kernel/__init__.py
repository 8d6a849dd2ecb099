from .core import (
    FredholmSpec,
    critical_scaling_gap,
    fredholm_logdet,
    large_gap_expansion,
    nystrom_log_det,
    sine_kernel_eigenvalues,
    toeplitz_fredholm_gap,
)
