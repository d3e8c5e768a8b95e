"""Local-unitary invariants from partial transpose and realignment.

Link matrices ``R(rho_ba^{T_a})`` between pairs of subsystems are multiplied
around closed paths; the trace and spectrum of the resulting operator do not
change under local unitaries, for any subsystem dimensions.
"""

__version__ = "0.1.0"

from .tensor import (
    DensityMatrix,
    PureState,
    ccn_norm,
    load_state,
    partial_transpose,
    pure_to_density,
    realign,
    reduced_density,
    save_state,
    swap_operator,
)
from .links import PAULI, LinkMatrix, link_matrix, pauli_link_matrix, u_matrix
from .paths import (
    InvariantReport,
    NumericalError,
    Path,
    char_poly_coefficients,
    invariant_report,
    is_retracing,
    kempe_invariant,
    path_operator,
    path_trace_invariant,
    pt_cube_trace,
    spectrum,
    two_tangle,
)
from .sampling import (
    apply_local,
    bell_state,
    ghz_state,
    haar_random_pure,
    haar_random_unitary,
    local_unitaries,
    product_state,
    random_orthogonal,
    random_real_pure,
    separable_state,
    substream,
)
from .verify import run_suite, spectral_survey, summarize_survey, write_survey
