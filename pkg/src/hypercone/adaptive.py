"""Per-class neighbor-count selection without access to any outlier data.

The selected k starts from the conservative upper bound floor(n/4), shrinks it
by a regularization factor zeta(n, d) = 1 / (1 + ln(n/d)) capped at 1, and
scales it by how dense the class is relative to a same-shaped uniform
reference cloud, measured as a ratio of mean cosine k-NN distances over a
ladder of neighbor depths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ClassTooSmallError,
    DegenerateRangeError,
    DimensionMismatchError,
    InvalidRangeError,
    KTooLargeError,
    ShapeMismatchError,
)
from .geometry import EPS, unit_rows
from .rng import make_rng

#: Neighbor-depth ladder: fractions of the floor(n/4) base applied per set.
FRACTIONS = tuple(round(0.05 * i, 2) for i in range(1, 21))

_BLOCK = 256


def zeta(n: int, d: int) -> float:
    """Regularizer 1 / (1 + ln(n/d)), clamped into (0, 1].

    Classes smaller than their dimension would push the raw value above 1 (or
    make it negative past the pole); both cases clamp to 1 so the bound
    floor(n/4) is never exceeded through this factor.
    """
    if n < 1 or d < 1:
        raise InvalidRangeError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    denom = 1.0 + math.log(n / d)
    if denom <= 0.0:
        return 1.0
    raw = 1.0 / denom
    return raw if raw <= 1.0 else 1.0


def uniform_reference(class_points, seed) -> np.ndarray:
    """Same-shaped cloud of i.i.d. uniforms on the class's global value range."""
    pts = np.asarray(class_points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionMismatchError(f"expected an n x d matrix, got shape {pts.shape}")
    if pts.shape[0] < 2:
        raise ClassTooSmallError("a uniform reference needs at least 2 rows")
    alpha = float(pts.min())
    beta = float(pts.max())
    if alpha == beta:
        raise DegenerateRangeError(f"all class entries equal {alpha}; no range to sample")
    rng = make_rng(seed)
    return alpha + (beta - alpha) * rng.random(pts.shape)


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5))


def _neighbor_depths(k_base: int) -> list[int]:
    return [max(1, _round_half_away(f * k_base)) for f in FRACTIONS]


def _mean_kth_distances(points, depths, centroid_snap: bool) -> tuple[np.ndarray, int]:
    """Per depth i: mean over points of the cosine distance to the i-th neighbor.

    Points are centered at their own centroid first; rows landing on the
    centroid have no direction and are skipped (the count is reported).
    """
    pts = np.asarray(points, dtype=np.float64)
    apex = pts.mean(axis=0)
    if centroid_snap:
        offsets = pts - apex
        apex = pts[int(np.argmin(np.einsum("ij,ij->i", offsets, offsets)))]
    unit, norms = unit_rows(pts - apex)
    keep = norms > EPS
    skipped = int(pts.shape[0] - keep.sum())
    unit = unit[keep]
    m = unit.shape[0]
    max_depth = max(depths)
    if max_depth > m - 1:
        raise KTooLargeError(
            f"neighbor depth {max_depth} needs {max_depth + 1} usable rows, have {m}"
        )
    cols = np.asarray(depths, dtype=np.int64) - 1
    totals = np.zeros(len(depths), dtype=np.float64)
    for start in range(0, m, _BLOCK):
        stop = min(start + _BLOCK, m)
        dist = 1.0 - np.clip(unit[start:stop] @ unit.T, -1.0, 1.0)
        dist[np.arange(stop - start), np.arange(start, stop)] = np.inf
        dist.sort(axis=1)
        totals += dist[:, cols].sum(axis=0)
    return totals / m, skipped


def density_ratio(class_points, uniform_points, centroid_snap: bool = False) -> float:
    """Mean cosine k-NN distance of the class over that of its uniform twin.

    A class denser than uniform has smaller neighbor distances, so the ratio
    drops below 1 and shrinks the selected k (narrower cones).
    """
    cls = np.asarray(class_points, dtype=np.float64)
    uni = np.asarray(uniform_points, dtype=np.float64)
    if cls.shape != uni.shape:
        raise ShapeMismatchError(f"class shape {cls.shape} != uniform shape {uni.shape}")
    n = cls.shape[0]
    if n < 8:
        raise ClassTooSmallError(f"density ratio needs n >= 8, got {n}")
    depths = _neighbor_depths(n // 4)
    mean_class = _mean_kth_distances(cls, depths, centroid_snap)[0]
    mean_uniform = _mean_kth_distances(uni, depths, centroid_snap)[0]
    denom = float(mean_uniform.mean())
    if denom <= 0.0:
        raise DegenerateRangeError("uniform reference has zero mean neighbor distance")
    return float(mean_class.mean()) / denom


@dataclass(frozen=True)
class AdaptiveKRecord:
    """Per-class diagnostics behind one adaptive-k decision."""

    label: int
    n: int
    d: int
    k_upper: int
    zeta: float
    density_ratio: float
    k_final: int
    skipped_class: int
    skipped_uniform: int
    seed: int


def adaptive_k_record(
    class_points,
    seed,
    centroid_snap: bool = False,
    label: int = 0,
    seed_echo: int | None = None,
) -> AdaptiveKRecord:
    """Full diagnostic record for one class; ``adaptive_k`` returns just k."""
    pts = np.asarray(class_points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionMismatchError(f"expected an n x d matrix, got shape {pts.shape}")
    n, d = pts.shape
    if n < 8:
        raise ClassTooSmallError(f"adaptive k needs n >= 8, class {label} has {n}")
    k_upper = n // 4
    regularizer = zeta(n, d)
    uniform = uniform_reference(pts, seed)
    depths = _neighbor_depths(k_upper)
    mean_class, skipped_class = _mean_kth_distances(pts, depths, centroid_snap)
    mean_uniform, skipped_uniform = _mean_kth_distances(uniform, depths, centroid_snap)
    denom = float(mean_uniform.mean())
    if denom <= 0.0:
        raise DegenerateRangeError("uniform reference has zero mean neighbor distance")
    ratio = float(mean_class.mean()) / denom
    k_final = min(max(_round_half_away(k_upper * regularizer * ratio), 1), n - 1)
    if seed_echo is None:
        seed_echo = seed if isinstance(seed, int) else -1
    return AdaptiveKRecord(
        label=label,
        n=n,
        d=d,
        k_upper=k_upper,
        zeta=regularizer,
        density_ratio=ratio,
        k_final=int(k_final),
        skipped_class=skipped_class,
        skipped_uniform=skipped_uniform,
        seed=int(seed_echo),
    )


def adaptive_k(class_points, seed, centroid_snap: bool = False) -> int:
    """Neighbor count for one class: clamp(round(floor(n/4) * zeta * ratio), 1, n-1)."""
    return adaptive_k_record(class_points, seed, centroid_snap).k_final
