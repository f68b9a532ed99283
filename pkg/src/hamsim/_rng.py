"""Seed derivation for reproducible, worker-count-independent sampling.

Every random draw in the package flows through a Generator built from an
explicit integer entropy tuple, so per-sample streams are pure functions of
(master seed, stream labels, sample index) and parallel scheduling cannot
change results.
"""

from __future__ import annotations

import numpy as np


def derived_rng(*entropy: int) -> np.random.Generator:
    """Generator for the stream named by an integer tuple."""
    return np.random.default_rng(np.random.SeedSequence(tuple(int(e) for e in entropy)))


def as_rng(seed_or_rng) -> np.random.Generator:
    """Accept either a seed (int/SeedSequence/None) or an existing Generator."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)
