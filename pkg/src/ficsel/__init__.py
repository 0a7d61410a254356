"""Focused model selection for generalized linear models.

Fits a wide GLM, enumerates candidate submodels under protection and
hierarchy constraints, and ranks them by the estimated mean squared
error of a user-declared focus parameter, in both the fixed-wide-model
and the local-asymptotics frameworks.  Averaged (multi-point) criteria,
exponential model-averaging weights, and simulation from the
post-selection limit law are included.
"""

from .afic import AficRecord, afic_scores
from .dataset import Dataset, load_birds, read_csv
from .design import CandidateSpec, DesignTemplate, build_design, wide_spec
from .errors import (
    ConfigError,
    DataError,
    FicselError,
    NonConvergenceError,
    NumericalError,
    RankDeficientError,
    SeparationError,
)
from .fic_fixed import FicRecord, SandwichSet, fic_fixed_score, sandwich_matrices
from .fic_local import (
    ArgminFicScheme,
    ExponentialFicScheme,
    FixedModelScheme,
    LocalFrame,
    ProjectionG,
    build_local_frame,
    candidate_subset,
    fic_local_score,
    projection_matrix,
    simulate_post_selection,
)
from .fit import FitResult, aic, bic, fit_mle
from .focus import FocusSpec, FocusValue, eval_focus, focus_gradient_check, poisson_tail
from .search import (
    RankingResult,
    SearchConfig,
    enumerate_candidates,
    model_average_weights,
    run_search,
)

__version__ = "0.1.0"

__all__ = [
    "AficRecord",
    "ArgminFicScheme",
    "CandidateSpec",
    "ConfigError",
    "DataError",
    "Dataset",
    "DesignTemplate",
    "ExponentialFicScheme",
    "FicRecord",
    "FicselError",
    "FitResult",
    "FixedModelScheme",
    "FocusSpec",
    "FocusValue",
    "LocalFrame",
    "NonConvergenceError",
    "NumericalError",
    "ProjectionG",
    "RankDeficientError",
    "RankingResult",
    "SandwichSet",
    "SearchConfig",
    "SeparationError",
    "afic_scores",
    "aic",
    "bic",
    "build_design",
    "build_local_frame",
    "candidate_subset",
    "enumerate_candidates",
    "eval_focus",
    "fic_fixed_score",
    "fic_local_score",
    "fit_mle",
    "focus_gradient_check",
    "load_birds",
    "model_average_weights",
    "poisson_tail",
    "projection_matrix",
    "read_csv",
    "run_search",
    "sandwich_matrices",
    "simulate_post_selection",
    "wide_spec",
]
