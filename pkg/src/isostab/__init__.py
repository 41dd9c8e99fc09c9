"""Hyers-Ulam stability constants and certification for epsilon-isometries."""
from .canonical import AlignedFrame, apply_alignment, canonical_alignment
from .constants import (
    ConstantTable,
    EpsilonBudget,
    Mode,
    build_constant_table,
    diagonal_constant,
    epsilon_sup,
    sigma,
    subdiagonal_constant,
)
from .errors import (
    AdmissibilityError,
    AmbiguityError,
    ConvergenceError,
    GenerationError,
    InvalidInputError,
    SequencingError,
)
from .harness import (
    ExperimentConfig,
    ExperimentSummary,
    perturbed_isometry,
    random_point_cloud,
    run_experiment,
    run_trial,
    trial_point_map,
)
from .linalg import QrResult, householder_qr, is_orthogonal, jacobi_svd, random_orthogonal
from .stability import (
    IsometryEstimate,
    PointMap,
    StabilityReport,
    Verdict,
    bound_polynomial,
    certify,
    crossover_epsilon,
    crossover_epsilon_bisect,
    distortion,
    fickett_bound,
    linear_majorant,
    recover_isometry_alignment,
    recover_isometry_procrustes,
    stability_bound_coefficient,
    verify_coordinate_bounds,
)

__version__ = "0.1.0"
