"""Dense vector and angular primitives shared by every other module.

Everything here is a pure function over immutable inputs and is safe to call
concurrently. All statistics run in float64 even when callers hold float32
data, which keeps percentile and variance estimates accurate on large classes.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptySetError,
    LabelMismatchError,
    NonFiniteError,
    ShapeMismatchError,
    ZeroVectorError,
)

#: Norms at or below this guard are treated as zero vectors. A centered
#: observation this close to the apex has no defined direction; downstream it
#: counts as inside every cone of its class at distance 0.
EPS = 1e-12


def _as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D vector, got shape {v.shape}")
    return v


def _as_matrix(points) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise DimensionMismatchError(f"expected an n x d matrix, got shape {points.shape}")
    return points


def cosine_similarity(u, v) -> float:
    """Cosine of the angle between two non-zero vectors, clamped to [-1, 1].

    Clamping absorbs the ~1e-16 overshoot floating-point dot products can
    produce, which would otherwise make arccos return NaN.
    """
    u = _as_vector(u)
    v = _as_vector(v)
    if u.shape != v.shape:
        raise DimensionMismatchError(f"vector dimensions differ: {u.shape[0]} vs {v.shape[0]}")
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u <= EPS or norm_v <= EPS:
        raise ZeroVectorError("cosine similarity is undefined for (near-)zero vectors")
    if np.array_equal(u, v):
        return 1.0  # identical vectors are exactly parallel; skip the rounding
    return float(np.clip(np.dot(u, v) / (norm_u * norm_v), -1.0, 1.0))


def angle_between(u, v) -> float:
    """Angle between two non-zero vectors, in radians within [0, pi]."""
    return float(np.arccos(cosine_similarity(u, v)))


def centroid(points) -> np.ndarray:
    """Arithmetic mean of the rows (numpy's pairwise summation keeps it accurate)."""
    points = _as_matrix(points)
    if points.shape[0] == 0:
        raise EmptySetError("centroid of an empty point set is undefined")
    return points.mean(axis=0)


def center(points, c) -> np.ndarray:
    """Subtract ``c`` from every row of ``points``."""
    points = _as_matrix(points)
    c = _as_vector(c)
    if points.shape[1] != c.shape[0]:
        raise DimensionMismatchError(
            f"cannot center {points.shape[1]}-d points at a {c.shape[0]}-d vector"
        )
    return points - c


def unit_rows(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-normalized copy plus row norms; rows at/below the zero guard stay zero."""
    norms = np.linalg.norm(points, axis=1)
    safe = np.where(norms > EPS, norms, 1.0)
    return points / safe[:, None], norms


class EmbeddingSet:
    """An n x d batch of finite float64 embeddings with optional integer labels.

    Args:
        data: array-like of shape (n, d) with n >= 1 and d >= 2; all finite.
        labels: optional length-n array-like of non-negative integers.
    """

    def __init__(self, data, labels=None):
        data = np.ascontiguousarray(np.asarray(data), dtype=np.float64)
        if data.ndim != 2:
            raise ShapeMismatchError(f"embeddings must be 2-D, got shape {data.shape}")
        n, d = data.shape
        if n < 1:
            raise EmptySetError("an embedding set needs at least one row")
        if d < 2:
            raise ShapeMismatchError(f"embedding dimension must be >= 2, got {d}")
        if not np.isfinite(data).all():
            bad = int(np.flatnonzero(~np.isfinite(data).all(axis=1))[0])
            raise NonFiniteError(f"non-finite embedding entry in row {bad}")
        if labels is not None:
            labels = np.asarray(labels)
            if labels.ndim != 1 or labels.shape[0] != n:
                raise ShapeMismatchError(
                    f"labels must be a length-{n} vector, got shape {labels.shape}"
                )
            if not np.issubdtype(labels.dtype, np.integer):
                raise LabelMismatchError(f"labels must be integers, got dtype {labels.dtype}")
            labels = labels.astype(np.int64)
            if labels.size and labels.min() < 0:
                raise LabelMismatchError("labels must be non-negative")
            labels.setflags(write=False)
        data.setflags(write=False)
        self.data = data
        self.labels = labels

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def label_universe(self) -> np.ndarray:
        if self.labels is None:
            raise LabelMismatchError("embedding set carries no labels")
        return np.unique(self.labels)

    def rows_for(self, label: int) -> np.ndarray:
        """Rows belonging to one class, in their original order."""
        if self.labels is None:
            raise LabelMismatchError("embedding set carries no labels")
        return self.data[self.labels == label]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        tag = "unlabeled" if self.labels is None else f"{len(np.unique(self.labels))} classes"
        return f"EmbeddingSet(n={self.n}, d={self.d}, {tag})"
