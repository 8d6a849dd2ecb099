from .core import (
    EquilibriumData,
    arc_log_moment,
    ell_closed_form,
    ell_integral,
    eq_density,
    eq_ell,
    equilibrium,
    gap_integral,
    gap_potential_derivative,
    normalization,
    theta1_solve,
)
from .potential import EquilibriumReport, log_potential, variational_residuals
