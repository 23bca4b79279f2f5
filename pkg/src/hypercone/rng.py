"""Seeded random streams with draws that are stable across platforms.

All randomness in the package flows through PCG64 generators keyed by an
explicit seed (plus an optional stream key for per-class sub-streams).
Normal variates are derived from raw uniforms with Box-Muller instead of
``Generator.standard_normal`` so that generated datasets reproduce
bit-for-bit regardless of numpy's internal ziggurat implementation.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed, *key) -> np.random.Generator:
    """PCG64 generator for ``seed``, optionally sub-keyed by extra integers."""
    if isinstance(seed, np.random.SeedSequence):
        seq = seed
    else:
        seq = np.random.SeedSequence((int(seed),) + tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(seq))


def normals(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard-normal draws via Box-Muller over the uniform bit stream."""
    shape = (int(shape),) if np.isscalar(shape) else tuple(int(s) for s in shape)
    count = int(np.prod(shape)) if shape else 1
    if count == 0:
        return np.zeros(shape, dtype=np.float64)
    half = (count + 1) // 2
    u1 = rng.random(half)  # in [0, 1), so 1 - u1 never hits zero
    u2 = rng.random(half)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]
    return z.reshape(shape)
