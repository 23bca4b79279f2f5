"""Scores and ID/OOD decisions for new embeddings against a built model.

A sample's score is its minimum normalized distance over all cones of all
classes that contain it (angular containment plus the apex rule), or the +inf
sentinel when nothing contains it; the decision is ID exactly when the score
is at or under the model's calibrated threshold. Higher score means more
out-of-distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contour import ContourModel, model_min_scores, _map_over
from .errors import DimensionMismatchError
from .geometry import EPS, EmbeddingSet, unit_rows

_BLOCK = 512


@dataclass(frozen=True)
class ScoreResult:
    """Score and decision for one sample.

    ``best_label``/``best_cone`` identify the minimizing cone (ties broken by
    lower label, then lower cone index) and are None for the +inf sentinel.
    A ``best_cone`` of None with a finite score marks the apex of a class
    whose contour has no cones (fully degenerate class).
    """

    score: float
    is_id: bool
    best_label: int | None
    best_cone: int | None


def _as_points(model: ContourModel, batch) -> np.ndarray:
    data = batch.data if isinstance(batch, EmbeddingSet) else np.asarray(batch, dtype=np.float64)
    if data.ndim != 2:
        raise DimensionMismatchError(f"expected an n x d batch, got shape {data.shape}")
    if data.shape[1] != model.dim:
        raise DimensionMismatchError(
            f"batch is {data.shape[1]}-d but the model was built on {model.dim}-d embeddings"
        )
    return np.ascontiguousarray(data)


def score_batch(model: ContourModel, batch, threads: int = 1) -> list[ScoreResult]:
    """Element-wise scores; results are independent of batch order."""
    points = _as_points(model, batch)
    scores, labels, cones = model_min_scores(model.contours, points, threads)
    results = []
    for s, label, cone in zip(scores.tolist(), labels.tolist(), cones.tolist()):
        finite = np.isfinite(s)
        results.append(
            ScoreResult(
                score=float(s),
                is_id=bool(s <= model.lam),
                best_label=int(label) if finite and label >= 0 else None,
                best_cone=int(cone) if finite and cone >= 0 else None,
            )
        )
    return results


def score_sample(model: ContourModel, z) -> ScoreResult:
    """Score one embedding vector."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1:
        raise DimensionMismatchError(f"expected a single d-vector, got shape {z.shape}")
    return score_batch(model, z[None, :])[0]


def _decide_chunk(model: ContourModel, points: np.ndarray) -> np.ndarray:
    lam = model.lam
    decided = np.zeros(points.shape[0], dtype=bool)
    for contour in model.contours:
        pending = np.flatnonzero(~decided)
        if pending.size == 0:
            break
        centered = points[pending] - contour.centroid
        z_unit, z_norms = unit_rows(centered)
        hit = z_norms <= EPS  # apex rule: score 0 is always <= lam
        dist = np.where(hit, 0.0, z_norms)
        alive = np.flatnonzero(~hit)
        for start in range(0, contour.cone_count, _BLOCK):
            if alive.size == 0:
                break
            stop = min(start + _BLOCK, contour.cone_count)
            a_unit, _ = unit_rows(contour.axes[start:stop])
            open_blk = contour.cos_openings[start:stop]
            cos = np.clip(z_unit[alive] @ a_unit.T, -1.0, 1.0)
            mask = cos > open_blk[None, :]
            full_cols = open_blk <= -1.0
            if full_cols.any():
                mask[:, full_cols] = True
            # min normalized distance within the block: divide by the largest
            # containing boundary (same quotient the scoring kernel computes)
            best_b = (mask * contour.radial_boundaries[start:stop][None, :]).max(axis=1)
            contained = best_b > 0.0
            found = contained.copy()
            found[contained] = dist[alive[contained]] / best_b[contained] <= lam
            if found.any():
                hit[alive[found]] = True
                alive = alive[~found]
        decided[pending[hit]] = True
    return decided


def decide_batch(model: ContourModel, batch, threads: int = 1) -> list[bool]:
    """ID/OOD decisions only, allowed to stop at the first qualifying cone.

    Produces exactly the same decisions as ``score_batch``.
    """
    points = _as_points(model, batch)
    if points.shape[0] == 0:
        return []
    if np.isinf(model.lam):
        return [True] * points.shape[0]
    chunk = max(1, -(-points.shape[0] // max(1, threads if threads > 0 else 8)))
    chunks = [points[i : i + chunk] for i in range(0, points.shape[0], chunk)]
    parts = _map_over(lambda c: _decide_chunk(model, c), chunks, threads)
    return np.concatenate(parts).tolist()
