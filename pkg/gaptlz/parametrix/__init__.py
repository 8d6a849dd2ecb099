from .bessel import bessel_model_psi, f_matrix, psi_asymptotic_error, psi_hat, psi_sector
from .context import ParametrixContext
from .core import (
    branch_root,
    conformal_map_zeta,
    g_function,
    global_parametrix,
    h_infinity,
    lens_points,
    phi_function,
    phi_on_gap,
    s_jump_matrix,
    szego_h,
    zeta_preimage,
)
from .local import (
    e_matrix,
    extrapolated_jump_residual,
    h_tilde,
    jump_residual,
    local_parametrix,
    matching_residual,
)
