"""Pick a per-class neighbor count without touching any outlier data.

Two classes with very different shapes get different k values: the selection
starts at floor(n/4), shrinks by the zeta(n, d) regularizer, and scales by how
angularly dense the class is relative to a same-range uniform cloud.
"""

import numpy as np

from hypercone import MixtureSpec, adaptive_k_record, gaussian_mixture, ring_means

rng_means = ring_means(5, radius=1.5)

# Class A: round multi-lobe cluster (directions spread over the whole circle).
round_class = gaussian_mixture(MixtureSpec(means=rng_means, sigma=0.5, n=2000, seed=11))

# Class B: strongly elongated cluster in 4-d (directions clump along one axis).
line_means = np.zeros((5, 4))
line_means[:, 0] = [-4.0, -2.0, 0.0, 2.0, 4.0]
elongated = gaussian_mixture(MixtureSpec(means=line_means, sigma=0.4, n=2000, seed=12))

print(f"{'class':<10} {'n':>5} {'d':>2} {'n/4':>5} {'zeta':>7} {'ratio':>7} {'k':>5}")
for name, dataset in (("round", round_class), ("elongated", elongated)):
    record = adaptive_k_record(dataset.data, seed=21)
    print(
        f"{name:<10} {record.n:>5} {record.d:>2} {record.k_upper:>5} "
        f"{record.zeta:>7.4f} {record.density_ratio:>7.4f} {record.k_final:>5}"
    )

print()
print("The elongated class's directions are concentrated, so its density")
print("ratio (class/uniform angular neighbor distance) drops well below 1")
print("and it gets a much smaller k: narrow cones that hug the line instead")
print("of fat cones that would swallow the empty directions around it.")
