"""Build a contour around one irregular multi-lobe class and detect outliers.

A single "class" made of five overlapping Gaussian lobes is wrapped in a union
of hypercones; the threshold is calibrated so 95% of in-distribution points
are accepted, and a surrounding shell of outliers is then scored against it.
"""

import numpy as np

from hypercone import (
    BuildConfig,
    MixtureSpec,
    auroc,
    build,
    fpr_at_tpr,
    gaussian_mixture,
    ring_means,
    score_batch,
    shell_ood,
)

# One irregular cluster: five sigma-0.5 lobes on a radius-1.5 ring merge into
# a single non-convex shape.
means = ring_means(5, radius=1.5)
train = gaussian_mixture(MixtureSpec(means=means, sigma=0.5, n=3000, seed=101))
test = gaussian_mixture(MixtureSpec(means=means, sigma=0.5, n=1200, seed=102))

result = build(train, test, BuildConfig(k=48, tpr_target=0.95, seed=7), threads=4)
model = result.model

print("cones per class:", [c.cone_count for c in model.contours])
print(f"calibrated threshold lambda = {model.lam:.4f}")
print(f"calibration TPR             = {result.calibration_tpr:.4f}  (target 0.95)")

# Outliers: a shell starting past the cloud's 99th-percentile radius.
radii = np.linalg.norm(train.data, axis=1)
print(f"ID radius p99               = {np.percentile(radii, 99):.2f}")
ood = shell_ood(1200, 2, None, inner_radius=3.0, outer_radius=4.5, seed=103)

id_scores = [r.score for r in score_batch(model, test, threads=4)]
ood_scores = [r.score for r in score_batch(model, ood, threads=4)]
print(f"FPR at 95% TPR              = {fpr_at_tpr(id_scores, ood_scores, 0.95):.4f}")
print(f"AUROC                       = {auroc(id_scores, ood_scores):.4f}")

# A few individual verdicts: the cluster center, a lobe center, a far point.
from hypercone import score_sample

for z in (np.array([0.0, 0.0]), means[0], np.array([5.0, 5.0])):
    r = score_sample(model, z)
    print(f"score({z.tolist()}) = {r.score:.3f} -> {'ID' if r.is_id else 'OOD'}")
