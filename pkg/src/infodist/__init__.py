"""Information-disturbance tradeoff of quantum measurements on the uniform
pure-state ensemble: minimal-disturbance instruments, outcome-state mutual
information, mutually unbiased bases as projective 2-designs, and the
depolarizing-channel frontier construction."""

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    BadPartitionError,
    ConvergenceWarning,
    DimMismatchError,
    EvenPrimeError,
    InfodistError,
    NonHermitianError,
    NonSquareError,
    NotIsometryError,
    NotOrthogonalError,
    NotPositiveError,
    WeightError,
)
from .linalg import (
    dagger,
    fidelity,
    gen_inv_sqrt,
    haar_state,
    haar_states,
    haar_unitaries,
    haar_unitary,
    herm_eig,
    mat_sqrt,
    outer,
    polar_decompose,
    validate_density,
    validate_pure_state,
)
from .measurement import (
    POVM,
    Instrument,
    PovmDiagnostics,
    apply_branch,
    apply_channel,
    basis_povm,
    coarse_grain,
    convex_mix,
    fine_grain,
    instrument_povm,
    instrument_validate,
    isometry_kraus,
    luders_projective,
    povm_validate,
    random_povm,
    random_stinespring_isometry,
    remix,
    reset_instrument,
    sqrt_instrument,
    trine_povm,
)
from .disturbance import (
    DisturbanceReport,
    PiOperator,
    avg_fidelity_design,
    avg_fidelity_mc,
    avg_fidelity_uniform,
    conditional_avg_disturbance,
    entanglement_fidelity,
    entfid_bound_check,
    min_disturbance_uniform,
    one_term_instrument,
    pair_moment,
    pi_operator,
    restore_counterexample,
    superadditivity_margin,
)
from .information import (
    InfoReport,
    info_finegrained_exact,
    info_finite_ensemble,
    info_uniform_mc,
    jones_overlap_integral,
    xlogx_integral,
)
from .galois import (
    FieldElement,
    FieldSpec,
    MubSet,
    design_check,
    design_operator,
    field_add,
    field_inv,
    field_mul,
    field_neg,
    field_trace,
    find_irreducible,
    is_irreducible,
    is_prime,
    mub_design_residual,
    mub_validate,
    wootters_fields_mub,
)
from .frontier import (
    AccessibleInfoResult,
    EnvironmentModel,
    FrontierPoint,
    accessible_info_lb,
    covariance_check,
    depolarize,
    depolarizing_instrument,
    env_unitary_check,
    environment_model,
    environment_state,
    frontier_curve,
    line_candidate,
    swap_dilation_unitary,
    twirl_channel,
    twirl_depolarizing_p,
)

__version__ = "0.1.0"
