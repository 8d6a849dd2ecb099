from .core import (
    LogDetResult,
    Recursion,
    dense_log_det,
    ds_log_det,
    log_det,
    moment_matrix,
    recursion,
)
from .identities import diff_identity_general, diff_identity_w0, diff_identity_y_form
from .opuc import (
    OPUCData,
    cd_residual,
    opuc,
    orthonormality_residual,
    y_matrix,
)
