"""Biorthogonal quantum field toolbox.

Numerical home for a one-dimensional photon field with three positional mode
families (broadband, local, and bio-local), the biorthogonal machinery that
relates them (association map, metric, dual products), ladder operator
algebra with equal-time commutator kernels, and free evolution in both the
state and the operator picture. A verification suite measures every core
relation on a discrete wavenumber grid and serializes the results; the
``bifield`` command line exposes the suite and a handful of scenario runners.
"""

__version__ = "0.1.0"

from .biortho import (
    DualBasis,
    FiniteBasis,
    MetricOperator,
    biorthogonal_system,
    bqm_inner,
    dual_basis,
    eigenbasis,
    evolve_pair,
    identity_resolution_residual,
    is_pseudo_hermitian,
    metric_from_dual,
    overlap_matrix,
    pair_overlap,
)
from .dynamics import (
    BogoliubovBlock,
    DispersionCheckResult,
    EvolutionSide,
    apply_diagonal_hamiltonian,
    apply_position_hamiltonian,
    bogoliubov_counterexample,
    closed_form_mixing_distance,
    dispersion_free_check,
    evolve_state,
    expectation_consistency,
    heisenberg_evolve,
    position_kernel,
)
from .errors import (
    BifieldError,
    ConfigError,
    DegenerateSpectrumError,
    GridError,
    GridMismatchError,
    IllConditionedBasisError,
    InvalidExpectationError,
    NormalizationError,
    SideTagMismatchError,
    UntaggedOperatorError,
    WeightError,
    WrapAroundWarning,
)
from .grid import (
    DEFAULT_CONTEXT,
    FieldContext,
    Grid,
    WeightFunction,
    bandlimited_interpolate,
    custom_weight,
    discrete_delta_k,
    discrete_delta_x,
    inv_sqrt_abs_k,
    make_grid,
    reciprocal,
    sqrt_abs_k,
    to_momentum,
    to_position,
    unit_weight,
)
from .operators import (
    FieldObservable,
    LadderOperator,
    OperatorTerm,
    apply_R,
    bio_conjugate,
    bio_expectation,
    blip_field_profile,
    coefficient_norm,
    coherent_field_expectation,
    commutator,
    commutator_kernel,
    electric_field,
    energy_expectation,
    hamiltonian_expectation,
    kernel_quadrature_oracle,
    magnetic_field,
    mode_annihilation,
    mode_creation,
    positional_annihilation,
    positional_creation,
    restrict_to_modes,
    vacuum_matrix_element,
    wavepacket_creation,
)
from .report import (
    CheckResult,
    VerificationReport,
    read_curve_csv,
    write_checks_csv,
    write_curve_csv,
    write_report_json,
)
from .states import (
    BIO_LOCAL_TAG,
    BLIP_TAG,
    LOCAL_TAG,
    PHOTON_TAG,
    BasisTag,
    ModeLabel,
    SingleExcitationState,
    StateComponent,
    bio_associate,
    bio_inner,
    eta_apply,
    eta_inner,
    eta_inv_apply,
    eta_inv_inner,
    gaussian_momentum_packet,
    gaussian_position_packet,
    make_state,
    norm,
    normalized,
    positional_amplitudes,
    positional_tag,
    standard_inner,
    state_from_records,
    state_to_records,
    superpose,
)
from .verify import default_grid, run_verification
