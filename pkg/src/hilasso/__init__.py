"""Hierarchical and collaborative sparse coding.

A numpy library for coding signals against a grouped dictionary with the
lasso, group lasso, hierarchical lasso and their collaborative variants,
solved by a monotone proximal-gradient scheme with closed-form hierarchical
thresholding. Includes coherence-based certificates for exact noiseless
recovery and a synthetic source-identification experiment harness.
"""

__version__ = "0.1.0"

from .analysis import (
    AssumptionViolatedError,
    CoherenceReport,
    EnumerationCapError,
    ProjectedCoherences,
    RecoveryCertificate,
    SupportSpec,
    block_coherence,
    block_spectral_norm,
    coherence_report,
    cross_coherence,
    gamma_bound,
    instance_conditions,
    norm_1_1,
    projected_coherences,
    sparse_block_coherences,
    sparse_matrix_norm_s,
    sparse_singular_value_ss,
    standard_coherence,
    sub_coherence,
    theorem2_check,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    MethodResult,
    small_scale_config,
    generate_synthetic,
    full_scale_config,
    run_experiment,
    run_missing_data_demo,
    support_metrics,
)
from .model import (
    CodeMatrix,
    Dictionary,
    GroupPartition,
    RegularizerSpec,
    SignalSet,
    group_regularizer,
    objective,
)
from .prox import (
    ProxWeights,
    collab_hilasso_prox,
    hilasso_prox,
    scalar_soft_threshold,
    vector_soft_threshold,
)
from .solver import (
    ConvergenceError,
    SolverConfig,
    SolverResult,
    gradient_data_term,
    solve_noiseless,
    sparsa_solve,
)

__all__ = [
    "__version__",
    "AssumptionViolatedError",
    "CodeMatrix",
    "CoherenceReport",
    "ConvergenceError",
    "Dictionary",
    "EnumerationCapError",
    "ExperimentConfig",
    "ExperimentResult",
    "GroupPartition",
    "MethodResult",
    "ProjectedCoherences",
    "ProxWeights",
    "RecoveryCertificate",
    "RegularizerSpec",
    "SignalSet",
    "SolverConfig",
    "SolverResult",
    "SupportSpec",
    "block_coherence",
    "block_spectral_norm",
    "coherence_report",
    "collab_hilasso_prox",
    "cross_coherence",
    "small_scale_config",
    "gamma_bound",
    "generate_synthetic",
    "gradient_data_term",
    "group_regularizer",
    "hilasso_prox",
    "instance_conditions",
    "norm_1_1",
    "objective",
    "full_scale_config",
    "projected_coherences",
    "run_experiment",
    "run_missing_data_demo",
    "scalar_soft_threshold",
    "solve_noiseless",
    "sparsa_solve",
    "sparse_block_coherences",
    "sparse_matrix_norm_s",
    "sparse_singular_value_ss",
    "standard_coherence",
    "sub_coherence",
    "support_metrics",
    "theorem2_check",
    "vector_soft_threshold",
]
