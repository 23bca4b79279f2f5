"""Metric contracts, checked against exhaustive pairwise oracles."""

import numpy as np
import pytest

from hypercone import (
    EmbeddingSet,
    auroc,
    evaluate,
    fpr_at_tpr,
    knn_baseline_score,
    threshold_at_tpr,
)
from hypercone.errors import (
    EmptyScoresError,
    InvalidRangeError,
    KTooLargeError,
    NonFiniteError,
    ZeroVectorError,
)

from reference import ref_auroc, ref_fpr_at_tpr, ref_nearest_rank


def random_scores(rng, size):
    """Score lists with ties and +inf sentinels mixed in."""
    values = rng.uniform(0.0, 2.0, size=size)
    ties = rng.integers(0, size, size=size // 5)
    values[ties] = np.round(values[ties], 1)  # force tie groups
    sentinels = rng.random(size) < 0.1
    values[sentinels] = np.inf
    return values


class TestThresholdAtTpr:
    def test_twenty_point_grid(self):
        scores = [0.05 * i for i in range(1, 21)]
        assert threshold_at_tpr(scores, 0.95) == pytest.approx(0.95, abs=1e-12)

    def test_singleton(self):
        assert threshold_at_tpr([0.3], 0.5) == 0.3

    def test_constant(self):
        assert threshold_at_tpr([1.0] * 7, 0.95) == 1.0

    def test_guarantees_fraction(self, rng):
        for _ in range(50):
            scores = rng.uniform(size=int(rng.integers(1, 60)))
            tpr = float(rng.uniform(0.05, 0.99))
            threshold = threshold_at_tpr(scores, tpr)
            assert np.mean(scores <= threshold) >= tpr

    def test_matches_reference(self, rng):
        for _ in range(80):
            scores = random_scores(rng, int(rng.integers(1, 80)))
            tpr = float(rng.uniform(0.05, 0.99))
            assert threshold_at_tpr(scores, tpr) == ref_nearest_rank(scores.tolist(), tpr)

    def test_empty_rejected(self):
        with pytest.raises(EmptyScoresError):
            threshold_at_tpr([], 0.95)

    def test_bad_tpr_rejected(self):
        with pytest.raises(InvalidRangeError):
            threshold_at_tpr([0.1], 1.0)


class TestFprAtTpr:
    def test_hand_count(self):
        id_scores = list(range(1, 21))
        assert fpr_at_tpr(id_scores, [5.0, 25.0, 30.0], 0.95) == pytest.approx(1 / 3, abs=1e-12)

    def test_perfect_separation(self):
        assert fpr_at_tpr([0.1, 0.2], [np.inf, np.inf], 0.95) == 0.0

    def test_degenerate_overlap(self):
        scores = [0.05 * i for i in range(1, 21)]
        assert fpr_at_tpr(scores, scores, 0.95) == pytest.approx(0.95, abs=1e-12)

    def test_monotone_in_tpr(self, rng):
        id_scores = rng.uniform(size=40)
        ood_scores = rng.uniform(size=30)
        values = [fpr_at_tpr(id_scores, ood_scores, t) for t in (0.1, 0.3, 0.5, 0.7, 0.9)]
        assert values == sorted(values)


class TestAuroc:
    def test_hand_pairs(self):
        assert auroc([0.1, 0.2, 0.3], [0.25, 0.4]) == pytest.approx(5 / 6, abs=1e-12)

    def test_perfect(self):
        assert auroc([0.1, 0.2], [0.5, 0.9]) == 1.0

    def test_self_is_half(self, rng):
        scores = random_scores(rng, 50)
        assert auroc(scores, scores) == 0.5

    def test_symmetry_identity_exact(self, rng):
        for _ in range(50):
            a = random_scores(rng, int(rng.integers(1, 60)))
            b = random_scores(rng, int(rng.integers(1, 60)))
            assert auroc(a, b) + auroc(b, a) == 1.0

    def test_invariant_under_monotone_transform(self, rng):
        a = rng.uniform(size=40)
        b = rng.uniform(size=25)
        before = auroc(a, b)
        after = auroc(np.exp(3 * a), np.exp(3 * b))
        assert after == pytest.approx(before, abs=1e-12)

    def test_nan_rejected(self):
        with pytest.raises(NonFiniteError):
            auroc([0.1, np.nan], [0.2])

    def test_empty_rejected(self):
        with pytest.raises(EmptyScoresError):
            auroc([], [0.1])


class TestAgainstPairwiseOracle:
    def test_hundred_random_pairs(self, rng):
        for _ in range(100):
            id_scores = random_scores(rng, int(rng.integers(1, 120)))
            ood_scores = random_scores(rng, int(rng.integers(1, 120)))
            tpr = float(rng.uniform(0.05, 0.99))
            assert auroc(id_scores, ood_scores) == pytest.approx(
                ref_auroc(id_scores.tolist(), ood_scores.tolist()), abs=1e-12
            )
            assert fpr_at_tpr(id_scores, ood_scores, tpr) == pytest.approx(
                ref_fpr_at_tpr(id_scores.tolist(), ood_scores.tolist(), tpr), abs=1e-12
            )


class TestKnnBaseline:
    def test_query_equal_to_train_row_uses_other_rows(self):
        train = EmbeddingSet([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        # query == row 0; nearest other row in cosine distance is (1,1)
        expected = 1.0 - 1.0 / np.sqrt(2.0)
        assert knn_baseline_score(train, [1.0, 0.0], 1) == pytest.approx(expected, abs=1e-12)

    def test_duplicate_rows_give_zero(self):
        train = EmbeddingSet([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert knn_baseline_score(train, [1.0, 0.0], 1) == 0.0

    def test_orthogonal_query(self):
        train = EmbeddingSet([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
        assert knn_baseline_score(train, [0.0, 5.0], 2) == 1.0

    def test_k_too_large(self):
        train = EmbeddingSet([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(KTooLargeError):
            knn_baseline_score(train, [1.0, 1.0], 2)

    def test_zero_query_rejected(self):
        train = EmbeddingSet([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ZeroVectorError):
            knn_baseline_score(train, [0.0, 0.0], 1)

    def test_brute_force_agreement(self, rng):
        for _ in range(30):
            data = rng.standard_normal((20, 4))
            z = rng.standard_normal(4)
            k = int(rng.integers(1, 19))
            unit = data / np.linalg.norm(data, axis=1, keepdims=True)
            d = np.sort(1.0 - np.clip(unit @ (z / np.linalg.norm(z)), -1, 1))
            assert knn_baseline_score(EmbeddingSet(data), z, k) == pytest.approx(
                float(d[k - 1]), abs=1e-12
            )


class TestEvaluate:
    def test_report_fields(self):
        report = evaluate([0.1, 0.2, np.inf], [0.5, np.inf], tpr=0.5)
        assert report.id_count == 3 and report.ood_count == 2
        assert report.id_sentinel_count == 1 and report.ood_sentinel_count == 1
        assert 0.0 <= report.fpr_at_tpr <= 1.0
        assert 0.0 <= report.auroc <= 1.0
        assert report.threshold_used == 0.2
        d = report.to_dict()
        assert set(d) == {
            "fpr_at_tpr", "auroc", "threshold_used", "tpr_target",
            "id_count", "ood_count", "id_sentinel_count", "ood_sentinel_count",
        }
