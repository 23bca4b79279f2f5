"""Deterministic synthetic data generators.

These produce the desk-scale scenarios used throughout the test and demo
suites: a multi-lobe Gaussian class whose lobes merge into one irregular
cluster, axis-aligned uniform boxes, and spherical-shell point clouds that
surround an in-distribution cloud from the outside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidRangeError, InvalidSpecError
from .geometry import EmbeddingSet
from .rng import make_rng, normals


@dataclass(frozen=True)
class MixtureSpec:
    """Isotropic Gaussian mixture drawn as a single labeled class.

    Attributes:
        means: (components, d) array of component means, d >= 2.
        sigma: shared isotropic standard deviation, >= 0.
        n: total draw count, >= number of components.
        seed: generator seed.
        label: class label attached to every row.
    """

    means: np.ndarray
    sigma: float
    n: int
    seed: int
    label: int = 0

    def __post_init__(self):
        means = np.atleast_2d(np.asarray(self.means, dtype=np.float64))
        object.__setattr__(self, "means", means)
        if means.shape[0] < 1 or means.ndim != 2:
            raise InvalidSpecError("a mixture needs at least one component mean")
        if means.shape[1] < 2:
            raise InvalidSpecError("component means must have dimension >= 2")
        if self.sigma < 0:
            raise InvalidSpecError(f"sigma must be >= 0, got {self.sigma}")
        if self.n < means.shape[0]:
            raise InvalidSpecError(
                f"n={self.n} is smaller than the component count {means.shape[0]}"
            )


def ring_means(components: int, radius: float, d: int = 2) -> np.ndarray:
    """Component means evenly spaced on a circle in the first two coordinates.

    The default multi-lobe scenario places 5 means on a radius-1.5 ring so the
    sigma-0.5 lobes merge into one larger, non-uniform cluster.
    """
    if components < 1:
        raise InvalidSpecError("need at least one component")
    if d < 2:
        raise InvalidSpecError("ring means need dimension >= 2")
    angles = 2.0 * np.pi * np.arange(components) / components
    means = np.zeros((components, d))
    means[:, 0] = radius * np.cos(angles)
    means[:, 1] = radius * np.sin(angles)
    return means


def gaussian_mixture(spec: MixtureSpec) -> EmbeddingSet:
    """Draw ``spec.n`` points, assigned round-robin to the mixture components."""
    components, d = spec.means.shape
    rng = make_rng(spec.seed)
    assignment = np.arange(spec.n) % components
    rows = spec.means[assignment] + spec.sigma * normals(rng, (spec.n, d))
    labels = np.full(spec.n, spec.label, dtype=np.int64)
    return EmbeddingSet(rows, labels)


def multi_class_mixture(specs: list[MixtureSpec]) -> EmbeddingSet:
    """Stack several single-class mixtures into one labeled set."""
    if not specs:
        raise InvalidSpecError("need at least one mixture spec")
    parts = [gaussian_mixture(s) for s in specs]
    data = np.vstack([p.data for p in parts])
    labels = np.concatenate([p.labels for p in parts])
    return EmbeddingSet(data, labels)


def uniform_box(n: int, d: int, lo: float, hi: float, seed: int) -> EmbeddingSet:
    """n x d i.i.d. uniform entries on [lo, hi)."""
    if not lo < hi:
        raise InvalidRangeError(f"need lo < hi, got [{lo}, {hi}]")
    if n < 1 or d < 2:
        raise InvalidSpecError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    rng = make_rng(seed)
    rows = lo + (hi - lo) * rng.random((n, d))
    return EmbeddingSet(rows)


def shell_ood(
    n: int,
    d: int,
    center=None,
    inner_radius: float = 4.0,
    outer_radius: float = 6.0,
    seed: int = 0,
) -> EmbeddingSet:
    """Points with directions uniform on the sphere and radii uniform on a shell.

    Placed with ``inner_radius`` beyond the ID cloud, this is the stock
    out-of-distribution surrogate surrounding an in-distribution cluster.
    """
    if not 0 < inner_radius < outer_radius:
        raise InvalidRangeError(
            f"need 0 < inner < outer, got inner={inner_radius}, outer={outer_radius}"
        )
    if n < 1 or d < 2:
        raise InvalidSpecError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    center = np.zeros(d) if center is None else np.asarray(center, dtype=np.float64)
    if center.shape != (d,):
        raise InvalidSpecError(f"center must be a {d}-vector, got shape {center.shape}")
    rng = make_rng(seed)
    directions = normals(rng, (n, d))
    norms = np.linalg.norm(directions, axis=1)
    while (norms <= 1e-12).any():  # probability ~0, but keep the draw total
        bad = norms <= 1e-12
        directions[bad] = normals(rng, (int(bad.sum()), d))
        norms = np.linalg.norm(directions, axis=1)
    directions /= norms[:, None]
    radii = inner_radius + (outer_radius - inner_radius) * rng.random(n)
    return EmbeddingSet(center + radii[:, None] * directions)
