"""Numerical engine for the quantization checks."""

from .errors import (
    QuantizationError,
    UnsupportedManifoldError,
    DimensionMismatchError,
    FlowBlowupError,
    DegenerateLatticeError,
    StencilOutOfDomainError,
    OpenLoopError,
    PolarizationNotPreservedError,
    NonHermitianInputError,
    TailMassError,
    QuadratureNonconvergenceError,
    SingularSumError,
    IllConditionedFitError,
)
from .phase_space import (
    HamiltonianFlow,
    hamiltonian_vector_field,
    poisson_bracket,
    lagrangian_of,
    generating_action,
    moment_map_s1,
    moment_map_defect,
)
from .prequant import (
    QuantizabilityChecker,
    CurvatureProbe,
    CurvatureGrid,
    OscillatorGeometry,
    check_torus_lattice,
    holonomy_loop,
    oscillator_loop,
    bohr_sommerfeld_levels,
    cylinder_momentum_levels,
)
from .operators import (
    prequantum_operator,
    half_form_correction,
    corrected_operator,
    spectrum,
    dirac_defect,
    hermite_quadrature_matrix,
)
from .pairing import (
    FourierTransform,
    SegalBargmannTransform,
    bks_pair,
    project_function,
    bogoliubov_ground_state,
    bogoliubov_oracle,
    squeezed_structure,
)
from .fresnel import (
    FresnelOracle,
    SchrodingerPairing,
    ProbeState,
    fresnel_gaussian,
    fresnel_quadratic,
    regularized_fresnel,
    hbar_scaling_defect,
    linear_term_contribution,
)
from .szego import (
    ExpansionFitter,
    monomial_norms_p1,
    kernel_diagonal,
    trace_integral,
    fit_expansion,
    ladder_table,
)

__all__ = [
    'QuantizationError', 'UnsupportedManifoldError', 'DimensionMismatchError', 'FlowBlowupError',
    'DegenerateLatticeError', 'StencilOutOfDomainError', 'OpenLoopError', 'PolarizationNotPreservedError',
    'NonHermitianInputError', 'TailMassError', 'QuadratureNonconvergenceError', 'SingularSumError',
    'IllConditionedFitError',
    'HamiltonianFlow', 'hamiltonian_vector_field', 'poisson_bracket', 'lagrangian_of', 'generating_action',
    'moment_map_s1', 'moment_map_defect',
    'QuantizabilityChecker', 'CurvatureProbe', 'CurvatureGrid', 'OscillatorGeometry', 'check_torus_lattice',
    'holonomy_loop', 'oscillator_loop', 'bohr_sommerfeld_levels', 'cylinder_momentum_levels',
    'prequantum_operator', 'half_form_correction', 'corrected_operator', 'spectrum', 'dirac_defect',
    'hermite_quadrature_matrix',
    'FourierTransform', 'SegalBargmannTransform', 'bks_pair', 'project_function', 'bogoliubov_ground_state',
    'bogoliubov_oracle', 'squeezed_structure',
    'FresnelOracle', 'SchrodingerPairing', 'ProbeState', 'fresnel_gaussian', 'fresnel_quadratic',
    'regularized_fresnel', 'linear_term_contribution', 'hbar_scaling_defect',
    'ExpansionFitter', 'monomial_norms_p1', 'kernel_diagonal', 'trace_integral', 'fit_expansion', 'ladder_table',
]
