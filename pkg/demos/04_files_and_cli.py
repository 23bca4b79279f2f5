"""Persist a model, reload it, and run the same flow through the CLI.

Model files are a small versioned binary (magic "HCK1"): cone axes at 32-bit,
every statistic at 64-bit, so a save/load round trip moves scores by at most
1e-6 and the threshold not at all. The CLI covers the same pipeline for shell
use; every subcommand is deterministic given its inputs, flags, and seed.
"""

import os
import tempfile

import numpy as np

from hypercone import (
    BuildConfig,
    MixtureSpec,
    build,
    gaussian_mixture,
    load_model,
    multi_class_mixture,
    ring_means,
    save_model,
    score_batch,
    write_embeddings,
    write_labels,
)
from hypercone.cli import main as cli_main

work = tempfile.mkdtemp(prefix="hypercone-demo-")
print("working in", work)

train = multi_class_mixture([
    MixtureSpec(means=ring_means(3, 1.0), sigma=0.3, n=400, seed=0, label=0),
    MixtureSpec(means=ring_means(3, 1.0) + 10.0, sigma=0.3, n=400, seed=1, label=1),
])
test = multi_class_mixture([
    MixtureSpec(means=ring_means(3, 1.0), sigma=0.3, n=160, seed=2, label=0),
    MixtureSpec(means=ring_means(3, 1.0) + 10.0, sigma=0.3, n=160, seed=3, label=1),
])

# --- library round trip
model = build(train, test, BuildConfig(k=8, seed=5), threads=2).model
model_path = os.path.join(work, "demo.hck")
save_model(model_path, model)
loaded = load_model(model_path)
print(f"model file: {os.path.getsize(model_path)} bytes, lambda preserved:",
      loaded.lam == model.lam)

probes = np.random.default_rng(9).normal(size=(200, 2)) * 4.0
before = np.array([r.score for r in score_batch(model, probes)])
after = np.array([r.score for r in score_batch(loaded, probes)])
finite = np.isfinite(before)
print(f"max score drift after reload: {np.abs(before[finite] - after[finite]).max():.2e}")

# --- the same pipeline through the CLI
paths = {name: os.path.join(work, name) for name in (
    "train.npy", "train_labels.npy", "test.npy", "test_labels.npy",
    "ood.npy", "cli.hck", "id_scores.csv", "ood_scores.csv",
)}
write_embeddings(paths["train.npy"], train.data)
write_labels(paths["train_labels.npy"], train.labels)
write_embeddings(paths["test.npy"], test.data)
write_labels(paths["test_labels.npy"], test.labels)
cli_main(["synth", "--kind", "shell", "--n", "300", "--dim", "2",
          "--center", "5,5", "--inner", "20", "--outer", "25",
          "--seed", "4", "--out", paths["ood.npy"]])

print("\n$ hypercone build ...")
cli_main(["build",
          "--train", paths["train.npy"], "--train-labels", paths["train_labels.npy"],
          "--test", paths["test.npy"], "--test-labels", paths["test_labels.npy"],
          "--model", paths["cli.hck"], "--k", "8", "--seed", "5"])

print("\n$ hypercone eval ...")
cli_main(["eval", "--model", paths["cli.hck"],
          "--id", paths["test.npy"], "--ood", paths["ood.npy"],
          "--id-scores-out", paths["id_scores.csv"],
          "--ood-scores-out", paths["ood_scores.csv"]])
