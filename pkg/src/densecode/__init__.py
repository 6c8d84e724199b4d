"""Dense-coding capacities, bounds and dense-codeability shells for multipartite states."""

from .criteria import Shell, ShellVerdict, classify, entropic_dc_test, ppt_test, reduction_criterion
from .densecoding import (
    CapacityReport,
    EncodingScheme,
    LoccStatus,
    WeylSet,
    b_locc,
    capacity_report,
    capacity_single_receiver,
    chi_global,
    chi_local,
    encode,
    ensemble_capacity,
    weyl_scheme,
    weyl_set,
)
from .infomeasures import Ensemble, holevo, relative_entropy, von_neumann_entropy
from .states import (
    DensityState,
    PartyLayout,
    Role,
    apply_local_unitaries,
    from_matrix,
    from_pure,
    partial_trace,
    partial_transpose,
    validate,
)
from .statezoo import make, werner_dc_threshold

__version__ = "0.1.0"
