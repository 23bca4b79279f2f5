"""Detection metrics and a pooled k-NN baseline score.

Score orientation everywhere: lower means more in-distribution. The +inf
sentinel marks samples outside every cone; both metrics treat it as an
ordinary (largest) score value, with ties - including inf against inf -
counted at half credit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyScoresError,
    InvalidRangeError,
    KTooLargeError,
    NonFiniteError,
    ZeroVectorError,
)
from .geometry import EPS, EmbeddingSet, unit_rows


def _scores_array(scores, name: str) -> np.ndarray:
    arr = np.asarray(scores, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyScoresError(f"{name} score list is empty")
    if np.isnan(arr).any():
        raise NonFiniteError(f"{name} scores contain NaN")
    return arr


def nearest_rank(values, q: float) -> float:
    """Ascending nearest-rank percentile: the value at rank ceil(q * n).

    This is the smallest list element v with fraction(values <= v) >= q. The
    rank is computed with a 1e-9 slack so a q that is not exactly
    representable in binary (0.95 stores as 0.95000000000000001...) still
    lands on the mathematically intended rank.
    """
    arr = _scores_array(values, "percentile input")
    rank = int(np.ceil(q * arr.size - 1e-9))
    rank = min(max(rank, 1), arr.size)
    return float(np.sort(arr)[rank - 1])


def threshold_at_tpr(id_scores, tpr: float) -> float:
    """Score threshold accepting at least a ``tpr`` fraction of the ID scores."""
    if not 0.0 < tpr < 1.0:
        raise InvalidRangeError(f"tpr must lie in (0, 1), got {tpr}")
    return nearest_rank(id_scores, tpr)


def fpr_at_tpr(id_scores, ood_scores, tpr: float = 0.95) -> float:
    """Fraction of OOD scores accepted at the threshold reaching ``tpr`` on ID."""
    threshold = threshold_at_tpr(id_scores, tpr)
    ood = _scores_array(ood_scores, "ood")
    return float(np.mean(ood <= threshold))


def _midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned the average rank of their group."""
    order = np.argsort(values, kind="stable")
    ordered = values[order]
    edges = np.flatnonzero(np.concatenate(([True], ordered[1:] != ordered[:-1], [True])))
    starts, ends = edges[:-1], edges[1:]
    group_rank = 0.5 * (starts + ends - 1) + 1.0
    ranks = np.empty(values.size, dtype=np.float64)
    ranks[order] = np.repeat(group_rank, ends - starts)
    return ranks


def auroc(id_scores, ood_scores) -> float:
    """Probability a random OOD score exceeds a random ID one, ties at half.

    Rank-sum formulation; equals the area under the ROC curve of the
    thresholded detector and satisfies auroc(a, b) + auroc(b, a) == 1 exactly.
    """
    id_arr = _scores_array(id_scores, "id")
    ood_arr = _scores_array(ood_scores, "ood")
    ranks = _midranks(np.concatenate([id_arr, ood_arr]))
    m = ood_arr.size
    u = float(ranks[id_arr.size:].sum()) - m * (m + 1) / 2.0
    return u / (id_arr.size * m)


def knn_baseline_score(train, z, k: int) -> float:
    """Cosine distance from ``z`` to its k-th nearest train embedding.

    All classes are pooled and vectors are unit-normalized. A query that
    bitwise-duplicates a train row is matched against the remaining rows, so
    scoring the train set against itself stays self-exclusive.
    """
    data = train.data if isinstance(train, EmbeddingSet) else np.asarray(train, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    n = data.shape[0]
    if not 1 <= k < n:
        raise KTooLargeError(f"k={k} requires 1 <= k < n={n}")
    keep = np.ones(n, dtype=bool)
    dup = np.flatnonzero((data == z).all(axis=1))
    if dup.size:
        keep[dup[0]] = False
    unit, norms = unit_rows(data[keep])
    if (norms <= EPS).any():
        raise ZeroVectorError("train rows must have positive norm")
    z_norm = float(np.linalg.norm(z))
    if z_norm <= EPS:
        raise ZeroVectorError("query vector has (near-)zero norm")
    cos = np.clip(unit @ (z / z_norm), -1.0, 1.0)
    return float(np.sort(1.0 - cos)[k - 1])


@dataclass(frozen=True)
class EvalReport:
    """Headline detection numbers for one ID-scores/OOD-scores pair."""

    fpr_at_tpr: float
    auroc: float
    threshold_used: float
    tpr_target: float
    id_count: int
    ood_count: int
    id_sentinel_count: int
    ood_sentinel_count: int

    def to_dict(self) -> dict:
        return {
            "fpr_at_tpr": self.fpr_at_tpr,
            "auroc": self.auroc,
            "threshold_used": self.threshold_used,
            "tpr_target": self.tpr_target,
            "id_count": self.id_count,
            "ood_count": self.ood_count,
            "id_sentinel_count": self.id_sentinel_count,
            "ood_sentinel_count": self.ood_sentinel_count,
        }


def evaluate(id_scores, ood_scores, tpr: float = 0.95) -> EvalReport:
    """FPR@TPR and AUROC for one evaluation pair, plus bookkeeping counts."""
    id_arr = _scores_array(id_scores, "id")
    ood_arr = _scores_array(ood_scores, "ood")
    return EvalReport(
        fpr_at_tpr=fpr_at_tpr(id_arr, ood_arr, tpr),
        auroc=auroc(id_arr, ood_arr),
        threshold_used=threshold_at_tpr(id_arr, tpr),
        tpr_target=tpr,
        id_count=int(id_arr.size),
        ood_count=int(ood_arr.size),
        id_sentinel_count=int(np.isinf(id_arr).sum()),
        ood_sentinel_count=int(np.isinf(ood_arr).sum()),
    )
