"""Shared fixtures and random-instance helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from hypercone import BuildConfig, EmbeddingSet


def random_labeled_instance(rng, n_classes, d, min_per_class, max_per_class, spread=4.0):
    """Generic continuous labeled cloud: one Gaussian blob per class."""
    data, labels = [], []
    centers = spread * rng.standard_normal((n_classes, d))
    for label in range(n_classes):
        count = int(rng.integers(min_per_class, max_per_class + 1))
        data.append(centers[label] + rng.standard_normal((count, d)))
        labels.extend([label] * count)
    return EmbeddingSet(np.vstack(data), np.asarray(labels, dtype=np.int64))


def split_train_test(rng, dataset: EmbeddingSet, test_fraction=0.3):
    """Random split keeping at least 2 train rows per class."""
    labels = dataset.labels
    train_mask = np.ones(dataset.n, dtype=bool)
    for label in np.unique(labels):
        rows = np.flatnonzero(labels == label)
        n_test = int(test_fraction * rows.size)
        n_test = min(n_test, rows.size - 2)
        if n_test > 0:
            picked = rng.choice(rows, size=n_test, replace=False)
            train_mask[picked] = False
    train = EmbeddingSet(dataset.data[train_mask], labels[train_mask])
    test = EmbeddingSet(dataset.data[~train_mask], labels[~train_mask])
    return train, test


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def small_model_inputs(rng):
    dataset = random_labeled_instance(rng, n_classes=3, d=4, min_per_class=25, max_per_class=40)
    train, test = split_train_test(rng, dataset)
    return train, test, BuildConfig(k=5, seed=11)
