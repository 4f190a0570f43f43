"""sepkit: probability bounds and Monte Carlo verification for linear
separability of high-dimensional random point sets, plus a one-shot
Fisher-discriminant error corrector with persistence and a CLI."""

__version__ = "0.1.0"

from . import backend, bounds, corrector, kernels, numerics, sampling, separability
from .bounds import (
    BallBoundQuery,
    BoundResult,
    CubeBoundQuery,
    TupleBoundQuery,
    ball_all_bound,
    ball_angle_bound,
    ball_single_bound,
    cube_all_bound,
    cube_single_bound,
    max_cardinality_all,
    max_cardinality_single,
    pairwise_orthogonality_bound,
    quasiorthogonal_set_size,
    tuple_bound,
    tuple_delta,
)
from .corrector import (
    CorrectorModel,
    FitOptions,
    KnowledgeUnit,
    LabeledData,
    PreprocessingPipeline,
    apply,
    cascade_apply,
    cluster_errors,
    fit,
    fit_pipeline,
    load_model,
    save_model,
    transform,
)
from .sampling import DistributionSpec, PointSet, load_csv, radial_statistics, sample, save_csv
from .separability import (
    SeparationReport,
    ball_experiment,
    cube_experiment,
    fisher_separability_experiment,
    orthogonality_experiment,
    tuple_experiment,
    wilson99,
)

__all__ = [
    "__version__",
    "backend",
    "bounds",
    "corrector",
    "kernels",
    "numerics",
    "sampling",
    "separability",
    "BallBoundQuery",
    "BoundResult",
    "CubeBoundQuery",
    "TupleBoundQuery",
    "ball_all_bound",
    "ball_angle_bound",
    "ball_single_bound",
    "cube_all_bound",
    "cube_single_bound",
    "max_cardinality_all",
    "max_cardinality_single",
    "pairwise_orthogonality_bound",
    "quasiorthogonal_set_size",
    "tuple_bound",
    "tuple_delta",
    "CorrectorModel",
    "FitOptions",
    "KnowledgeUnit",
    "LabeledData",
    "PreprocessingPipeline",
    "apply",
    "cascade_apply",
    "cluster_errors",
    "fit",
    "fit_pipeline",
    "load_model",
    "save_model",
    "transform",
    "DistributionSpec",
    "PointSet",
    "load_csv",
    "radial_statistics",
    "sample",
    "save_csv",
    "SeparationReport",
    "ball_experiment",
    "cube_experiment",
    "fisher_separability_experiment",
    "orthogonality_experiment",
    "tuple_experiment",
    "wilson99",
]
