from gaptlz.asymptotics import (
    fisher_hartwig_expansion,
    szego_expansion,
    theorem_error_envelope,
    widom_expansion,
    x_critical,
)
from gaptlz.cue import count_distribution, tail_bound
from gaptlz.equilibrium import equilibrium, variational_residuals
from gaptlz.parametrix import ParametrixContext, jump_residual, matching_residual
from gaptlz.sine_kernel import fredholm_logdet
from gaptlz.symbol import GapParameter, SymbolSpec, TrigPolynomial
from gaptlz.toeplitz import log_det

__all__ = [
    "GapParameter",
    "ParametrixContext",
    "SymbolSpec",
    "TrigPolynomial",
    "count_distribution",
    "equilibrium",
    "fisher_hartwig_expansion",
    "fredholm_logdet",
    "jump_residual",
    "log_det",
    "matching_residual",
    "szego_expansion",
    "tail_bound",
    "theorem_error_envelope",
    "variational_residuals",
    "widom_expansion",
    "x_critical",
]
