"""Loewner order on Hermitian matrices, matrix-valued capacities and
quantum Choquet integrals for approximate density-matrix reconstruction."""

from .capacity import (
    MatrixCapacity,
    MobiusTable,
    ValidationReport,
    additive_lattice,
    build_lattice,
    identity_residual,
    inverse_mobius,
    mobius_transform,
    power_set,
    scalar_capacity,
    validate_capacity,
)
from .choquet import (
    ChoquetResult,
    ExpectationVector,
    RankingPermutation,
    classical_choquet,
    comonotonic,
    quantum_choquet,
    quantum_choquet_ev_increments,
    quantum_choquet_mobius,
    quantum_choquet_obs_increments,
    rank,
)
from .hermitian import (
    Definiteness,
    EigenDecomposition,
    HermitianMatrix,
    OrderClassification,
    Relation,
    SpectralInterval,
    eigendecompose,
    expectation,
    is_positive_semidefinite,
    loewner_compare,
    random_density_matrix,
    random_unitary,
    spectral_interval,
)
from .order import (
    LowerSetGenerators,
    UpperSetGenerators,
    cumulative_chain,
    lower_contains,
    t0_separating_generator,
    upper_contains,
    upward_witness,
)
from .reconstruct import (
    ReconstructionPolicy,
    ReconstructionReport,
    check_linear_independence,
    check_trace_inequality,
    projector_example,
    reconstruct,
)
from .zd import ZdSystem, coherent_family, displacement, expand_state, position_projectors

__version__ = "0.1.0"
