"""Vector and angular primitive contracts."""

import numpy as np
import pytest

from hypercone import EmbeddingSet, angle_between, center, centroid, cosine_similarity
from hypercone.errors import (
    DimensionMismatchError,
    EmptySetError,
    LabelMismatchError,
    NonFiniteError,
    ShapeMismatchError,
    ZeroVectorError,
)

from reference import cos_clamped


class TestCosineSimilarity:
    def test_orthogonal(self):
        assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_identical(self):
        assert cosine_similarity([1.0, 0.0], [1.0, 0.0]) == 1.0

    def test_forty_five_degrees(self):
        # direct evaluation: 1 / sqrt(2)
        assert cosine_similarity([1.0, 0.0], [1.0, 1.0]) == pytest.approx(0.70710678, abs=1e-8)

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroVectorError):
            cosine_similarity([0.0, 0.0], [1.0, 0.0])
        with pytest.raises(ZeroVectorError):
            cosine_similarity([1.0, 0.0], [1e-13, 0.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cosine_similarity([1.0, 0.0], [1.0, 0.0, 0.0])

    def test_scale_invariance(self, rng):
        for _ in range(50):
            u = rng.standard_normal(5)
            v = rng.standard_normal(5)
            a, b = rng.uniform(0.1, 100.0, size=2)
            assert cosine_similarity(a * u, b * v) == pytest.approx(
                cosine_similarity(u, v), abs=1e-12
            )

    def test_always_clamped(self, rng):
        for _ in range(200):
            u = rng.standard_normal(3)
            v = u * rng.uniform(0.5, 2.0)  # parallel pairs stress the clamp
            assert -1.0 <= cosine_similarity(u, v) <= 1.0

    def test_matches_scalar_reference(self, rng):
        for _ in range(100):
            u = rng.standard_normal(6)
            v = rng.standard_normal(6)
            assert cosine_similarity(u, v) == pytest.approx(cos_clamped(u, v), abs=1e-12)


class TestAngleBetween:
    def test_orthogonal(self):
        assert angle_between([1.0, 0.0], [0.0, 1.0]) == pytest.approx(np.pi / 2, abs=1e-12)

    def test_antipodal(self):
        assert angle_between([1.0, 0.0], [-1.0, 0.0]) == pytest.approx(np.pi, abs=1e-12)

    def test_forty_five_degrees(self):
        assert angle_between([1.0, 0.0], [1.0, 1.0]) == pytest.approx(np.pi / 4, abs=1e-12)

    def test_symmetric_and_zero_on_self(self, rng):
        for _ in range(50):
            u = rng.standard_normal(4)
            v = rng.standard_normal(4)
            assert angle_between(u, v) == angle_between(v, u)
            assert angle_between(u, u) == 0.0

    def test_zero_vector_propagates(self):
        with pytest.raises(ZeroVectorError):
            angle_between([0.0, 0.0], [1.0, 0.0])


class TestCentroid:
    def test_midpoint(self):
        assert centroid([[0.0, 0.0], [2.0, 0.0]]).tolist() == [1.0, 0.0]

    def test_singleton(self):
        assert centroid([[1.0, 1.0]]).tolist() == [1.0, 1.0]

    def test_symmetry(self):
        points = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
        assert np.allclose(centroid(points), [0.0, 0.0], atol=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(EmptySetError):
            centroid(np.empty((0, 3)))

    def test_centered_rows_have_zero_mean(self, rng):
        for _ in range(20):
            points = 10.0 * rng.standard_normal((200, 5)) + rng.standard_normal(5)
            centered = center(points, centroid(points))
            max_row_norm = np.linalg.norm(points, axis=1).max()
            assert np.linalg.norm(centroid(centered)) <= 1e-9 * max_row_norm


class TestCenter:
    def test_exact_shift(self):
        assert center([[2.0, 3.0]], [2.0, 3.0]).tolist() == [[0.0, 0.0]]

    def test_zero_shift(self):
        points = [[1.0, 0.0], [0.0, 1.0]]
        assert center(points, [0.0, 0.0]).tolist() == points

    def test_arithmetic(self):
        assert center([[3.0, 1.0]], [1.0, 1.0]).tolist() == [[2.0, 0.0]]

    def test_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            center([[1.0, 2.0]], [1.0, 2.0, 3.0])

    def test_round_trip(self, rng):
        points = rng.standard_normal((50, 4)) * 5.0
        c = rng.standard_normal(4)
        back = center(center(points, c), -c)
        assert np.abs(back - points).max() <= 1e-12


class TestEmbeddingSet:
    def test_basic(self):
        es = EmbeddingSet([[1.0, 2.0], [3.0, 4.0]], [0, 1])
        assert es.n == 2 and es.d == 2
        assert es.labels.tolist() == [0, 1]

    def test_rejects_nan(self):
        with pytest.raises(NonFiniteError, match="row 1"):
            EmbeddingSet([[1.0, 2.0], [np.nan, 4.0]])

    def test_rejects_inf(self):
        with pytest.raises(NonFiniteError):
            EmbeddingSet([[1.0, np.inf]])

    def test_rejects_1d(self):
        with pytest.raises(ShapeMismatchError):
            EmbeddingSet([1.0, 2.0, 3.0])

    def test_rejects_d1(self):
        with pytest.raises(ShapeMismatchError):
            EmbeddingSet([[1.0], [2.0]])

    def test_rejects_empty(self):
        with pytest.raises(EmptySetError):
            EmbeddingSet(np.empty((0, 3)))

    def test_rejects_negative_labels(self):
        with pytest.raises(LabelMismatchError):
            EmbeddingSet([[1.0, 2.0]], [-1])

    def test_rejects_label_length_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            EmbeddingSet([[1.0, 2.0]], [0, 1])

    def test_rejects_float_labels(self):
        with pytest.raises(LabelMismatchError):
            EmbeddingSet([[1.0, 2.0]], np.asarray([0.5]))

    def test_data_is_read_only(self):
        es = EmbeddingSet([[1.0, 2.0]])
        with pytest.raises(ValueError):
            es.data[0, 0] = 5.0

    def test_rows_for(self):
        es = EmbeddingSet([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], [1, 0, 1])
        assert es.rows_for(1).tolist() == [[1.0, 2.0], [5.0, 6.0]]
