"""Hypercone contours over embedding spaces for out-of-distribution detection.

Build per-class unions of hypercones from labeled embeddings, calibrate a
global normalized-distance threshold at a target true-positive rate, and
score or classify unseen embeddings as in- or out-of-distribution.

Typical flow::

    from hypercone import BuildConfig, build, score_batch

    result = build(train_set, test_set, BuildConfig(k=10, seed=7))
    decisions = [r.is_id for r in score_batch(result.model, unseen)]
"""

from .adaptive import (
    AdaptiveKRecord,
    adaptive_k,
    adaptive_k_record,
    density_ratio,
    uniform_reference,
    zeta,
)
from .contour import (
    BuildConfig,
    BuildResult,
    ClassContour,
    ClassRecord,
    ContourModel,
    Hypercone,
    build,
    build_class_contour,
    build_model,
    calibrate_lambda,
    cone_members,
    knn_angle,
    radial_boundary,
    sample_uniform_directions,
)
from .errors import HyperconeError
from .geometry import EPS, EmbeddingSet, angle_between, center, centroid, cosine_similarity
from .io import (
    load_model,
    read_embeddings,
    read_labels,
    read_scores,
    save_model,
    write_embeddings,
    write_labels,
    write_scores,
)
from .metrics import (
    EvalReport,
    auroc,
    evaluate,
    fpr_at_tpr,
    knn_baseline_score,
    threshold_at_tpr,
)
from .scoring import ScoreResult, decide_batch, score_batch, score_sample
from .synth import MixtureSpec, gaussian_mixture, multi_class_mixture, ring_means, shell_ood, uniform_box

__version__ = "0.1.0"

__all__ = [
    "AdaptiveKRecord",
    "BuildConfig",
    "BuildResult",
    "ClassContour",
    "ClassRecord",
    "ContourModel",
    "EPS",
    "EmbeddingSet",
    "EvalReport",
    "Hypercone",
    "HyperconeError",
    "MixtureSpec",
    "ScoreResult",
    "adaptive_k",
    "adaptive_k_record",
    "angle_between",
    "auroc",
    "build",
    "build_class_contour",
    "build_model",
    "calibrate_lambda",
    "center",
    "centroid",
    "cone_members",
    "cosine_similarity",
    "decide_batch",
    "density_ratio",
    "evaluate",
    "fpr_at_tpr",
    "gaussian_mixture",
    "knn_angle",
    "knn_baseline_score",
    "load_model",
    "multi_class_mixture",
    "radial_boundary",
    "read_embeddings",
    "read_labels",
    "read_scores",
    "ring_means",
    "sample_uniform_directions",
    "save_model",
    "score_batch",
    "score_sample",
    "shell_ood",
    "threshold_at_tpr",
    "uniform_box",
    "uniform_reference",
    "write_embeddings",
    "write_labels",
    "write_scores",
    "zeta",
]
