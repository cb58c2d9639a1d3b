"""Reproducible randomness.

One seed -> many independent substreams, addressed by small integer (or
tuple) stream labels. Philox is counter-based, so trial k's stream is
identical no matter how many other trials ran first; every randomized
routine in the package routes through here.
"""

from __future__ import annotations

import numpy as np

__all__ = ["make_rng"]


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for the given seed and substream label."""
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(ss))
