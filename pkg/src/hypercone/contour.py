"""Per-class hypercone construction and global threshold calibration.

The contour of a labeled class is the union of one hypercone per training
observation. Each cone's axis is the observation's offset from the class
centroid, its opening angle is the angle between the axis and its k-th
nearest class neighbor in cosine distance, and its radial boundary is
mean + s * sigma (population sigma) of the apex distances of the observations
that fall inside the angular boundary. An observation's score is its apex
distance divided by the radial boundary of the containing cone, minimized
over containing cones; the global threshold lambda is calibrated so a target
fraction of in-distribution observations scores at or under it.

Membership conventions, shared with the scoring module and mirrored by the
test suite's brute-force reference:

- angular containment is strict (cos tau > cos theta), except that a cone
  whose opening reaches the full sphere (cos theta == -1) contains everything;
- a centered observation with norm <= EPS sits at the apex: it is inside
  every cone of that class at distance exactly 0, and it never serves as a
  cone axis or angular neighbor;
- cones that end up with no members, or whose members all sit at the apex
  (possible only with exact angular duplicates in the data), are dropped:
  they would have no positive radial boundary and removing them provably
  changes no observation's score.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .adaptive import AdaptiveKRecord, adaptive_k_record
from .errors import (
    ClassTooSmallError,
    DimensionMismatchError,
    EmptyConeError,
    EmptyScoresError,
    InvalidConfigError,
    InvalidRangeError,
    KTooLargeError,
    LabelMismatchError,
    NonFiniteError,
    ShapeMismatchError,
    ZeroVectorError,
)
from .geometry import EPS, EmbeddingSet, centroid as centroid_of, unit_rows
from .metrics import nearest_rank
from .rng import make_rng, normals

#: Cone-axis block width for the batched kernels; results do not depend on it.
_BLOCK = 512

#: Sub-stream keys so per-class random draws never collide across purposes.
_AXIS_STREAM = 1
_ADAPTIVE_STREAM = 2


@dataclass(frozen=True)
class BuildConfig:
    """Knobs for contour construction.

    Attributes:
        k: neighbor count used for opening angles; a positive integer applied
            to every class, or the string "adaptive" for per-class selection.
        sigma_multiplier: the s in the radial boundary mean + s * sigma.
        tpr_target: fraction of ID calibration observations the threshold
            must accept; open interval (0, 1).
        centroid_snap: snap each class centroid to its nearest (Euclidean)
            training observation before centering.
        lambda_mode: "per_observation" calibrates on each observation's
            minimum normalized distance; "pooled" calibrates on the pooled
            per-cone member distances.
        axis_mode: "data" uses centered train observations as cone axes;
            "random" replaces them with uniformly sampled directions.
        seed: master seed for every random draw the build makes.
    """

    k: int | str = "adaptive"
    sigma_multiplier: float = 2.0
    tpr_target: float = 0.95
    centroid_snap: bool = False
    lambda_mode: str = "per_observation"
    axis_mode: str = "data"
    seed: int = 0

    def __post_init__(self):
        if isinstance(self.k, str):
            if self.k != "adaptive":
                raise InvalidConfigError(f"k must be a positive integer or 'adaptive', got {self.k!r}")
        else:
            if int(self.k) != self.k or self.k < 1:
                raise InvalidConfigError(f"k must be a positive integer or 'adaptive', got {self.k!r}")
            object.__setattr__(self, "k", int(self.k))
        if not 0.0 < self.tpr_target < 1.0:
            raise InvalidConfigError(f"tpr_target must lie in (0, 1), got {self.tpr_target}")
        if not self.sigma_multiplier >= 0.0:
            raise InvalidConfigError(f"sigma_multiplier must be >= 0, got {self.sigma_multiplier}")
        if self.lambda_mode not in ("per_observation", "pooled"):
            raise InvalidConfigError(f"unknown lambda_mode {self.lambda_mode!r}")
        if self.axis_mode not in ("data", "random"):
            raise InvalidConfigError(f"unknown axis_mode {self.axis_mode!r}")
        if int(self.seed) != self.seed or self.seed < 0 or self.seed >= 2**64:
            raise InvalidConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class Hypercone:
    """One cone: unnormalized axis, cosine of the opening angle, radial cutoff."""

    axis: np.ndarray
    cos_opening: float
    radial_boundary: float


class ClassContour:
    """All hypercones of one class, stored as packed arrays.

    ``axes[i]``, ``cos_openings[i]`` and ``radial_boundaries[i]`` describe
    cone i; ``cone(i)`` returns the same data as a ``Hypercone`` view.
    """

    def __init__(self, label: int, centroid: np.ndarray, axes, cos_openings, radial_boundaries):
        centroid = np.ascontiguousarray(centroid, dtype=np.float64)
        if centroid.ndim != 1:
            raise ShapeMismatchError(f"centroid must be a vector, got shape {centroid.shape}")
        axes = np.ascontiguousarray(axes, dtype=np.float64).reshape(-1, centroid.shape[0])
        cos_openings = np.ascontiguousarray(cos_openings, dtype=np.float64).ravel()
        radial_boundaries = np.ascontiguousarray(radial_boundaries, dtype=np.float64).ravel()
        if not (axes.shape[0] == cos_openings.size == radial_boundaries.size):
            raise ShapeMismatchError("cone arrays disagree on cone count")
        if not np.isfinite(centroid).all() or not np.isfinite(axes).all():
            raise NonFiniteError("contour geometry contains non-finite entries")
        if axes.shape[0]:
            if (np.linalg.norm(axes, axis=1) <= EPS).any():
                raise ZeroVectorError("cone axes must have positive norm")
            if (np.abs(cos_openings) > 1.0).any() or not np.isfinite(cos_openings).all():
                raise ShapeMismatchError("cos_openings must lie in [-1, 1]")
            if (radial_boundaries <= 0.0).any() or not np.isfinite(radial_boundaries).all():
                raise ShapeMismatchError("radial boundaries must be positive")
        for arr in (centroid, axes, cos_openings, radial_boundaries):
            arr.setflags(write=False)
        self.label = int(label)
        self.centroid = centroid
        self.axes = axes
        self.cos_openings = cos_openings
        self.radial_boundaries = radial_boundaries

    @property
    def cone_count(self) -> int:
        return self.axes.shape[0]

    @property
    def dim(self) -> int:
        return self.centroid.shape[0]

    def cone(self, i: int) -> Hypercone:
        return Hypercone(self.axes[i], float(self.cos_openings[i]), float(self.radial_boundaries[i]))

    def cones(self) -> list[Hypercone]:
        return [self.cone(i) for i in range(self.cone_count)]


class ContourModel:
    """Every class contour plus the calibrated global threshold."""

    def __init__(self, contours: list[ClassContour], lam: float, config: BuildConfig):
        contours = list(contours)
        if not contours:
            raise LabelMismatchError("a model needs at least one class contour")
        labels = [c.label for c in contours]
        if labels != list(range(len(contours))):
            raise LabelMismatchError(f"contour labels must be 0..{len(contours) - 1}, got {labels}")
        dims = {c.dim for c in contours}
        if len(dims) != 1:
            raise DimensionMismatchError(f"contours disagree on dimension: {sorted(dims)}")
        lam = float(lam)
        if np.isnan(lam) or lam < 0.0:
            raise InvalidConfigError(f"lambda must be >= 0, got {lam}")
        self.contours = contours
        self.lam = lam
        self.config = config

    @property
    def dim(self) -> int:
        return self.contours[0].dim

    @property
    def label_count(self) -> int:
        return len(self.contours)

    @property
    def cone_count(self) -> int:
        return sum(c.cone_count for c in self.contours)

    def __repr__(self) -> str:
        return (
            f"ContourModel(labels={self.label_count}, dim={self.dim}, "
            f"cones={self.cone_count}, lam={self.lam:.6g})"
        )


def knn_angle(axis_index: int, class_points, k: int) -> float:
    """Cosine of the opening angle: similarity to the k-th nearest other row.

    Nearness is cosine distance 1 - cos; ties break toward the lower row
    index. The axis row itself is never its own neighbor.
    """
    pts = np.asarray(class_points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionMismatchError(f"expected an m x d matrix, got shape {pts.shape}")
    m = pts.shape[0]
    if not 0 <= axis_index < m:
        raise IndexError(f"axis_index {axis_index} out of range for {m} rows")
    if not 1 <= k <= m - 1:
        raise KTooLargeError(f"k={k} needs k other rows, class has {m} rows")
    unit, norms = unit_rows(pts)
    if (norms <= EPS).any():
        raise ZeroVectorError("rows with (near-)zero norm have no direction")
    cos = np.clip(unit @ unit[axis_index], -1.0, 1.0)
    cos[(pts == pts[axis_index]).all(axis=1)] = 1.0  # exact duplicates are exactly parallel
    dist = 1.0 - cos
    dist[axis_index] = np.inf
    order = np.argsort(dist, kind="stable")
    return float(cos[order[k - 1]])


def cone_members(cone: Hypercone, points) -> np.ndarray:
    """Indices of rows inside the cone's angular boundary.

    Strict containment cos(tau) > cos_opening; rows at the apex (norm <= EPS)
    are always members, and a full-sphere cone (cos_opening == -1) contains
    every row.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise DimensionMismatchError(f"expected an m x d matrix, got shape {pts.shape}")
    axis = np.asarray(cone.axis, dtype=np.float64)
    if pts.shape[1] != axis.shape[0]:
        raise DimensionMismatchError(
            f"points are {pts.shape[1]}-d but the cone axis is {axis.shape[0]}-d"
        )
    axis_norm = float(np.linalg.norm(axis))
    if axis_norm <= EPS:
        raise ZeroVectorError("cone axis has (near-)zero norm")
    unit, norms = unit_rows(pts)
    if cone.cos_opening <= -1.0:
        mask = np.ones(pts.shape[0], dtype=bool)
    else:
        cos = np.clip(unit @ (axis / axis_norm), -1.0, 1.0)
        mask = cos > cone.cos_opening
        mask |= norms <= EPS
    return np.flatnonzero(mask)


def radial_boundary(distances, sigma_multiplier: float) -> float:
    """Mean plus ``sigma_multiplier`` population standard deviations."""
    arr = np.asarray(distances, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyConeError("no member distances; the radial boundary is undefined")
    return float(arr.mean() + sigma_multiplier * arr.std())


def sample_uniform_directions(count: int, d: int, seed) -> np.ndarray:
    """``count`` unit vectors uniform on the d-sphere, deterministic per seed."""
    if count < 1 or d < 2:
        raise InvalidRangeError(f"need count >= 1 and d >= 2, got count={count}, d={d}")
    rng = make_rng(seed)
    directions = normals(rng, (count, d))
    norms = np.linalg.norm(directions, axis=1)
    while (norms <= EPS).any():  # probability ~0; redraw to keep every row usable
        bad = norms <= EPS
        directions[bad] = normals(rng, (int(bad.sum()), d))
        norms = np.linalg.norm(directions, axis=1)
    return directions / norms[:, None]


def calibrate_lambda(per_observation_scores, pooled_scores, config: BuildConfig) -> float:
    """Nearest-rank percentile of the mode-selected score list at tpr_target."""
    values = per_observation_scores if config.lambda_mode == "per_observation" else pooled_scores
    if values is None:
        raise EmptyScoresError(f"no scores supplied for lambda_mode={config.lambda_mode}")
    return nearest_rank(values, config.tpr_target)


@dataclass
class ClassBuild:
    """Output of one per-class construction pass.

    ``train_scores``/``test_scores`` hold each class observation's minimum
    normalized distance over the class's own containing cones (+inf when no
    cone contains it), aligned with the input row order.
    """

    contour: ClassContour
    train_scores: np.ndarray
    test_scores: np.ndarray
    pooled: np.ndarray | None
    dropped_cones: int
    details: dict | None


def _snap_to_nearest_row(rows: np.ndarray, point: np.ndarray) -> np.ndarray:
    offsets = rows - point
    return rows[int(np.argmin(np.einsum("ij,ij->i", offsets, offsets)))].copy()


def build_class_contour(
    train_rows,
    test_rows,
    k: int,
    config: BuildConfig,
    label: int = 0,
    collect_details: bool = False,
    collect_pooled: bool | None = None,
) -> ClassBuild:
    """Construct one class contour and score the class's own observations.

    ``test_rows`` may be None or empty; both train and test observations of
    the class participate in memberships, radial boundaries, and scores.
    """
    train = np.ascontiguousarray(np.asarray(train_rows), dtype=np.float64)
    if train.ndim != 2:
        raise DimensionMismatchError(f"train rows must be 2-D, got shape {train.shape}")
    m, d = train.shape
    if m < 2:
        raise ClassTooSmallError(f"class {label} has {m} train observation(s); need >= 2")
    if test_rows is None:
        test = np.empty((0, d))
    else:
        test = np.ascontiguousarray(np.asarray(test_rows), dtype=np.float64)
        if test.ndim != 2 or test.shape[1] != d:
            raise DimensionMismatchError(
                f"class {label}: test rows have shape {test.shape}, expected (*, {d})"
            )
    if not 1 <= k <= m - 1:
        raise KTooLargeError(f"class {label}: k={k} is not in [1, {m - 1}]")
    if collect_pooled is None:
        collect_pooled = config.lambda_mode == "pooled"

    apex = centroid_of(train)
    if config.centroid_snap:
        apex = _snap_to_nearest_row(train, apex)

    x = np.vstack([train - apex, test - apex])
    x_unit, x_norms = unit_rows(x)
    x_dist = np.where(x_norms <= EPS, 0.0, x_norms)
    apex_rows = x_norms <= EPS

    # Angular neighbor candidates: non-degenerate centered train rows.
    cand = np.flatnonzero(x_norms[:m] > EPS)

    details: dict | None = None
    if collect_details:
        details = {"memberships": [], "axis_rows": [], "kth_neighbor_rows": []}

    if cand.size == 0:
        # Every train row sits on the centroid: no directions exist, the
        # contour degenerates to the apex point, and apex-coincident
        # observations score 0 while anything else is uncontained.
        contour = ClassContour(label, apex, np.empty((0, d)), np.empty(0), np.empty(0))
        own = np.where(apex_rows, 0.0, np.inf)
        pooled = np.empty(0) if collect_pooled else None
        return ClassBuild(contour, own[:m].copy(), own[m:].copy(), pooled, 0, details)

    if config.axis_mode == "random":
        axes = sample_uniform_directions(
            m, d, np.random.SeedSequence((config.seed, label, _AXIS_STREAM))
        )
        axis_rows = None
        needed = k  # random axes are not class rows, so nothing is excluded
    else:
        axes = x[cand]
        axis_rows = cand  # cone j is built on train row cand[j]
        needed = k + 1
    if cand.size < needed:
        raise KTooLargeError(
            f"class {label}: k={k} needs {needed} non-degenerate train rows, have {cand.size}"
        )

    a_unit, _ = unit_rows(axes)
    total_axes = axes.shape[0]
    n_all = x.shape[0]

    kept_axes: list[np.ndarray] = []
    kept_cos: list[np.ndarray] = []
    kept_b: list[np.ndarray] = []
    pooled_chunks: list[np.ndarray] | None = [] if collect_pooled else None
    own_best_b = np.zeros(n_all)  # per row: largest containing radial boundary
    dropped = 0

    for start in range(0, total_axes, _BLOCK):
        stop = min(start + _BLOCK, total_axes)
        cos_x = np.clip(x_unit @ a_unit[start:stop].T, -1.0, 1.0)  # (n_all, B)

        # Opening angles: k-th nearest candidate in cosine distance, ties by
        # lower row index (stable sort); cos theta is the selected candidate's
        # own cosine entry so membership comparisons are exact.
        cos_cand = cos_x[cand, :]
        dist_cand = 1.0 - cos_cand
        if axis_rows is not None:
            cols = np.arange(start, stop)
            dist_cand[cols, cols - start] = np.inf
        order = np.argsort(dist_cand, axis=0, kind="stable")
        kth_pos = order[k - 1, :]
        block_cols = np.arange(stop - start)
        cos_open = cos_cand[kth_pos, block_cols]

        mask = cos_x > cos_open[None, :]
        full_cols = cos_open <= -1.0
        if full_cols.any():
            mask[:, full_cols] = True
        if apex_rows.any():
            mask[apex_rows, :] = True

        mask_f = mask.astype(np.float64)
        counts = mask_f.sum(axis=0)
        sums = mask_f.T @ x_dist
        keep = sums > 0.0  # needs at least one member at positive distance
        with np.errstate(invalid="ignore", divide="ignore"):
            mu = sums / counts
            dev = x_dist[:, None] - mu[None, :]
            var = np.einsum("nb,nb->b", mask_f, dev * dev) / counts
            b = mu + config.sigma_multiplier * np.sqrt(var)

        dropped += int((~keep).sum())
        kept = np.flatnonzero(keep)
        if kept.size == 0:
            continue
        kept_axes.append(axes[start:stop][kept])
        kept_cos.append(cos_open[kept])
        kept_b.append(b[kept])
        own_best_b = np.maximum(own_best_b, (mask[:, kept] * b[kept][None, :]).max(axis=1))
        if pooled_chunks is not None:
            for c in kept:
                pooled_chunks.append(x_dist[mask[:, c]] / b[c])
        if details is not None:
            for c in kept:
                details["memberships"].append(np.flatnonzero(mask[:, c]))
                details["kth_neighbor_rows"].append(int(cand[kth_pos[c]]))
                if axis_rows is not None:
                    details["axis_rows"].append(int(axis_rows[start + c]))

    if kept_axes:
        contour = ClassContour(
            label, apex, np.vstack(kept_axes), np.concatenate(kept_cos), np.concatenate(kept_b)
        )
    else:
        contour = ClassContour(label, apex, np.empty((0, d)), np.empty(0), np.empty(0))
    own_min = np.full(n_all, np.inf)
    contained = own_best_b > 0.0
    own_min[contained] = x_dist[contained] / own_best_b[contained]
    own_min[apex_rows] = 0.0
    if pooled_chunks is None:
        pooled = None
    elif pooled_chunks:
        pooled = np.concatenate(pooled_chunks)
    else:
        pooled = np.empty(0)
    return ClassBuild(contour, own_min[:m].copy(), own_min[m:].copy(), pooled, dropped, details)


def class_min_scores(contour: ClassContour, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Min normalized distance of each raw embedding against one class contour.

    Returns (scores, cone_indices); a score is +inf with cone index -1 when no
    cone of the class contains the point. Rows at the class apex score exactly
    0 (cone 0 when the class has cones).

    The per-row distance is constant across the class's cones, so the minimum
    normalized distance is the distance over the LARGEST containing radial
    boundary; tracking a masked max of boundaries avoids materializing the
    full ratio matrix.
    """
    z = points - contour.centroid
    z_unit, z_norms = unit_rows(z)
    dist = np.where(z_norms <= EPS, 0.0, z_norms)
    apex_rows = z_norms <= EPS
    n = z.shape[0]
    best_b = np.zeros(n)
    best_cone = np.full(n, -1, dtype=np.int64)
    for start in range(0, contour.cone_count, _BLOCK):
        stop = min(start + _BLOCK, contour.cone_count)
        a_unit, _ = unit_rows(contour.axes[start:stop])
        cos = np.clip(z_unit @ a_unit.T, -1.0, 1.0)
        open_blk = contour.cos_openings[start:stop]
        mask = cos > open_blk[None, :]
        full_cols = open_blk <= -1.0
        if full_cols.any():
            mask[:, full_cols] = True
        if apex_rows.any():
            mask[apex_rows, :] = True
        masked_b = mask * contour.radial_boundaries[start:stop][None, :]
        blk_best = masked_b.max(axis=1)
        blk_arg = masked_b.argmax(axis=1)  # first max: lowest cone index on ties
        update = blk_best > best_b  # strict: earlier blocks keep lower cone indices
        best_b[update] = blk_best[update]
        best_cone[update] = blk_arg[update] + start
    contained = best_b > 0.0
    best = np.full(n, np.inf)
    best[contained] = dist[contained] / best_b[contained]
    if apex_rows.any():
        best[apex_rows] = 0.0  # holds even for a contour with zero cones
        if contour.cone_count:
            best_cone[apex_rows] = 0  # every cone contains the apex; lowest wins
    return best, best_cone


def model_min_scores(
    contours: list[ClassContour], points: np.ndarray, threads: int = 1
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Min normalized distance over every cone of every class.

    Returns (scores, labels, cone_indices) with -1 labels/cones for
    uncontained points. Ties across classes keep the lower label; ties within
    a class keep the lower cone index.
    """
    points = np.ascontiguousarray(np.asarray(points), dtype=np.float64)
    n = points.shape[0]
    best = np.full(n, np.inf)
    best_label = np.full(n, -1, dtype=np.int64)
    best_cone = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return best, best_label, best_cone
    per_class = _map_over(
        lambda contour: class_min_scores(contour, points), contours, threads
    )
    for label, (scores, cones) in enumerate(per_class):
        update = scores < best
        best[update] = scores[update]
        best_label[update] = label
        best_cone[update] = cones[update]
    return best, best_label, best_cone


def _resolve_threads(threads: int) -> int:
    if threads is None or threads <= 0:
        return min(32, os.cpu_count() or 1)
    return int(threads)


def _map_over(fn, items, threads: int) -> list:
    threads = min(_resolve_threads(threads), max(len(items), 1))
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class ClassRecord:
    """Per-class line of the build report."""

    label: int
    n_train: int
    n_test: int
    k: int
    cone_count: int
    dropped_cones: int
    adaptive: AdaptiveKRecord | None


@dataclass
class BuildResult:
    """A built model plus the calibration evidence behind its threshold.

    ``calibration_scores`` holds one score per calibration observation (train
    rows in input order, then test rows), computed against the full model via
    the same kernel the scoring module uses, so scoring the calibration data
    reproduces them bit for bit.
    """

    model: ContourModel
    class_records: list[ClassRecord]
    calibration_scores: np.ndarray
    calibration_tpr: float


def _validated_labels(train: EmbeddingSet, test: EmbeddingSet) -> int:
    if train.labels is None or test.labels is None:
        raise LabelMismatchError("build needs labeled train and test sets")
    if train.d != test.d:
        raise DimensionMismatchError(f"train is {train.d}-d but test is {test.d}-d")
    train_labels = np.unique(train.labels)
    label_count = int(train_labels[-1]) + 1
    if train_labels.size != label_count:
        missing = sorted(set(range(label_count)) - set(train_labels.tolist()))
        raise LabelMismatchError(f"train labels must cover 0..{label_count - 1}; missing {missing}")
    extra = sorted(set(np.unique(test.labels).tolist()) - set(train_labels.tolist()))
    if extra:
        raise LabelMismatchError(f"test labels {extra} never appear in the train set")
    return label_count


def build(train: EmbeddingSet, test: EmbeddingSet, config: BuildConfig, threads: int = 1) -> BuildResult:
    """Construct every class contour, calibrate lambda, and report.

    Calibration scores are each train/test observation's minimum normalized
    distance over the cones of EVERY class (identical to what the scoring
    module assigns), so the accepted fraction lands in
    [tpr_target, tpr_target + 1/n] whenever the scores are tie-free.
    """
    label_count = _validated_labels(train, test)
    counts = np.bincount(train.labels, minlength=label_count)
    too_small = np.flatnonzero(counts < 2)
    if too_small.size:
        raise ClassTooSmallError(
            f"classes {too_small.tolist()} have fewer than 2 train observations"
        )
    if isinstance(config.k, int) and config.k >= counts.min():
        raise KTooLargeError(
            f"k={config.k} must be smaller than the smallest class size {int(counts.min())}"
        )

    def build_one(label: int) -> tuple[ClassBuild, ClassRecord]:
        train_rows = train.data[train.labels == label]
        test_rows = test.data[test.labels == label]
        adaptive = None
        if config.k == "adaptive":
            adaptive = adaptive_k_record(
                train_rows,
                np.random.SeedSequence((config.seed, label, _ADAPTIVE_STREAM)),
                centroid_snap=config.centroid_snap,
                label=label,
                seed_echo=config.seed,
            )
            k = adaptive.k_final
        else:
            k = config.k
        result = build_class_contour(train_rows, test_rows, k, config, label=label)
        record = ClassRecord(
            label=label,
            n_train=train_rows.shape[0],
            n_test=test_rows.shape[0],
            k=k,
            cone_count=result.contour.cone_count,
            dropped_cones=result.dropped_cones,
            adaptive=adaptive,
        )
        return result, record

    built = _map_over(build_one, list(range(label_count)), threads)
    contours = [result.contour for result, _ in built]
    records = [record for _, record in built]

    all_points = np.vstack([train.data, test.data])
    calibration_scores = model_min_scores(contours, all_points, threads)[0]
    if config.lambda_mode == "pooled":
        pooled = np.concatenate([result.pooled for result, _ in built])
        lam = nearest_rank(pooled, config.tpr_target)
    else:
        lam = nearest_rank(calibration_scores, config.tpr_target)

    model = ContourModel(contours, lam, config)
    calibration_tpr = float(np.mean(calibration_scores <= lam))
    return BuildResult(model, records, calibration_scores, calibration_tpr)


def build_model(train: EmbeddingSet, test: EmbeddingSet, config: BuildConfig, threads: int = 1) -> ContourModel:
    """``build`` without the report, for callers that only want the model."""
    return build(train, test, config, threads).model
