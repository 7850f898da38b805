"""Numerical construction, verification and stress-testing of the unique
unitary phase-space realization of decoupled harmonic oscillators, with a
uniqueness scan that re-derives the structure from its constraints and a
truncated Fock lift."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConstraintStructureError,
    DegenerateFormError,
    DimensionMismatchError,
    InconsistencyError,
    MetricError,
    NotNaturallyComplexError,
    RangeError,
    ResourceLimitError,
    ScanFailureError,
    SegalQuantError,
    SpecError,
)
from .oscillator import (
    MIN_FREQUENCY,
    FrequencySpec,
    GeneratorMatrix,
    PhaseSpacePoint,
    build_generator,
    classical_hamiltonian,
    gauss_legendre_band,
    omega_apply,
)
from .symplectic import (
    ComplexUnit,
    Metric,
    SymplecticForm,
    complex_pairing,
    complex_unit_from,
    complexify,
    is_naturally_complex,
    poisson_bracket_canonical,
)
from .realization import (
    CanonicalTransform,
    Realization,
    canonical_transform,
    construct_unique_realization,
    hamiltonian_from_generator,
    realization_to_dict,
    standard_rotation,
    standard_space_metric,
    standard_symplectic_form,
)
from .uniqueness import (
    AxiomCheck,
    AxiomReport,
    ConstraintProblem,
    ScanSolution,
    SolutionSet,
    constraint_space_dimension,
    solve_metric_constraint,
    uniqueness_scan,
    verify_axioms,
)
from .dynamics import (
    FlowDomainCheck,
    FlowOperator,
    InvariantLog,
    check_flow_domain,
    complex_evolution,
    evolve,
    flow_closed_form,
    flow_expm,
    format_trajectory_table,
)
from .fock import (
    FockBasis,
    LadderPair,
    build_fock,
    ccr_residuals,
    evolution_group,
    one_particle_block,
    second_quantized_hamiltonian,
)

__all__ = [
    "__version__",
    # errors
    "SegalQuantError", "SpecError", "DimensionMismatchError", "MetricError",
    "DegenerateFormError", "NotNaturallyComplexError", "InconsistencyError",
    "ConstraintStructureError", "ScanFailureError", "ResourceLimitError",
    "RangeError", "ConfigError",
    # oscillator model
    "MIN_FREQUENCY", "FrequencySpec", "PhaseSpacePoint", "GeneratorMatrix",
    "omega_apply", "build_generator", "classical_hamiltonian", "gauss_legendre_band",
    # symplectic structures
    "Metric", "SymplecticForm", "ComplexUnit", "complex_unit_from",
    "is_naturally_complex", "poisson_bracket_canonical", "complexify", "complex_pairing",
    # realization
    "Realization", "CanonicalTransform", "construct_unique_realization",
    "canonical_transform", "hamiltonian_from_generator", "realization_to_dict",
    "standard_symplectic_form", "standard_space_metric", "standard_rotation",
    # uniqueness
    "ConstraintProblem", "ScanSolution", "SolutionSet", "AxiomCheck", "AxiomReport",
    "solve_metric_constraint", "constraint_space_dimension", "uniqueness_scan",
    "verify_axioms",
    # dynamics
    "FlowOperator", "InvariantLog", "FlowDomainCheck", "flow_closed_form",
    "flow_expm", "evolve", "complex_evolution", "check_flow_domain",
    "format_trajectory_table",
    # fock
    "FockBasis", "LadderPair", "build_fock", "second_quantized_hamiltonian",
    "evolution_group", "one_particle_block", "ccr_residuals",
]
