"""Generator determinism and distributional sanity checks."""

import numpy as np
import pytest

from hypercone import MixtureSpec, gaussian_mixture, multi_class_mixture, ring_means, shell_ood, uniform_box
from hypercone.errors import InvalidRangeError, InvalidSpecError


class TestGaussianMixture:
    def test_round_robin_counts_differ_by_at_most_one(self):
        spec = MixtureSpec(means=ring_means(5, 1.5), sigma=0.5, n=23, seed=3)
        out = gaussian_mixture(spec)
        # component of draw i is i mod 5; verify counts directly
        counts = [len(range(c, 23, 5)) for c in range(5)]
        assert max(counts) - min(counts) <= 1
        assert out.n == 23 and out.d == 2

    def test_sigma_zero_reproduces_means(self):
        means = ring_means(5, 1.5)
        out = gaussian_mixture(MixtureSpec(means=means, sigma=0.0, n=5, seed=9))
        assert np.allclose(out.data, means, atol=0.0)

    def test_deterministic(self):
        spec = MixtureSpec(means=ring_means(5, 1.5), sigma=0.5, n=100, seed=42)
        a = gaussian_mixture(spec)
        b = gaussian_mixture(spec)
        assert np.array_equal(a.data, b.data)
        assert np.array_equal(a.labels, b.labels)

    def test_single_class_label(self):
        out = gaussian_mixture(MixtureSpec(means=ring_means(3, 1.0), sigma=0.1, n=30, seed=1, label=7))
        assert set(out.labels.tolist()) == {7}

    def test_lobes_land_near_their_means(self):
        means = ring_means(5, 10.0)
        out = gaussian_mixture(MixtureSpec(means=means, sigma=0.2, n=5000, seed=5))
        for c in range(5):
            rows = out.data[c::5]
            assert np.linalg.norm(rows.mean(axis=0) - means[c]) < 0.05

    def test_invalid_specs(self):
        with pytest.raises(InvalidSpecError):
            MixtureSpec(means=np.empty((0, 2)), sigma=1.0, n=5, seed=0)
        with pytest.raises(InvalidSpecError):
            MixtureSpec(means=ring_means(5, 1.0), sigma=1.0, n=3, seed=0)
        with pytest.raises(InvalidSpecError):
            MixtureSpec(means=ring_means(2, 1.0), sigma=-0.5, n=5, seed=0)


class TestMultiClassMixture:
    def test_stacks_labels(self):
        specs = [
            MixtureSpec(means=ring_means(2, 1.0), sigma=0.1, n=10, seed=0, label=0),
            MixtureSpec(means=ring_means(2, 1.0) + 5.0, sigma=0.1, n=12, seed=1, label=1),
        ]
        out = multi_class_mixture(specs)
        assert out.n == 22
        assert np.bincount(out.labels).tolist() == [10, 12]


class TestUniformBox:
    def test_range_containment(self):
        out = uniform_box(500, 3, -2.0, 1.5, seed=8)
        assert out.data.min() >= -2.0 and out.data.max() <= 1.5

    def test_monte_carlo_mean(self):
        # per-coordinate mean of U(0,1) concentrates at 0.5
        out = uniform_box(10_000, 2, 0.0, 1.0, seed=17)
        assert np.abs(out.data.mean(axis=0) - 0.5).max() < 0.02

    def test_deterministic(self):
        a = uniform_box(50, 4, 0.0, 1.0, seed=3)
        b = uniform_box(50, 4, 0.0, 1.0, seed=3)
        assert np.array_equal(a.data, b.data)

    def test_invalid_range(self):
        with pytest.raises(InvalidRangeError):
            uniform_box(10, 2, 1.0, 1.0, seed=0)


class TestShellOod:
    def test_radii_in_shell(self):
        center = np.array([3.0, -1.0, 2.0])
        out = shell_ood(400, 3, center, inner_radius=4.0, outer_radius=6.0, seed=2)
        radii = np.linalg.norm(out.data - center, axis=1)
        assert radii.min() >= 4.0 and radii.max() <= 6.0

    def test_deterministic(self):
        a = shell_ood(40, 2, None, 1.0, 2.0, seed=5)
        b = shell_ood(40, 2, None, 1.0, 2.0, seed=5)
        assert np.array_equal(a.data, b.data)

    def test_directions_cover_the_sphere(self):
        out = shell_ood(5000, 2, None, 1.0, 1.1, seed=11)
        directions = out.data / np.linalg.norm(out.data, axis=1, keepdims=True)
        assert np.linalg.norm(directions.mean(axis=0)) < 0.05

    def test_invalid_radii(self):
        with pytest.raises(InvalidRangeError):
            shell_ood(10, 2, None, 2.0, 1.0, seed=0)
        with pytest.raises(InvalidRangeError):
            shell_ood(10, 2, None, 0.0, 1.0, seed=0)
