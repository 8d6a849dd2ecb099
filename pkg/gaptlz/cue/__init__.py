from .core import (
    CountDistribution,
    asymptotic_tail_bound,
    count_distribution,
    log_mgf,
    log_tail_bound,
    mgf,
    rate_exponent,
    tail_bound,
    useful_threshold,
)
