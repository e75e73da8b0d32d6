"""Splittable seeded RNG.

Each (seed, stream-path) pair keys an independent counter-based Philox
generator, so adding a consumer never perturbs another consumer's stream and
identical seed + call sequence reproduces bit-identical draws.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _key(seed: int, path: str):
    digest = hashlib.sha256(f"{seed}/{path}".encode()).digest()
    return [int.from_bytes(digest[i:i + 8], "little") for i in range(0, 16, 8)]


class SeededRng:
    """Deterministic, splittable random stream."""

    def __init__(self, seed: int, path: str = ""):
        self.seed = int(seed)
        self.path = path
        self.generator = np.random.Generator(np.random.Philox(key=_key(self.seed, path)))

    def derive(self, name: str) -> "SeededRng":
        """Independent child stream; stable under unrelated code changes."""
        child_path = f"{self.path}/{name}" if self.path else name
        return SeededRng(self.seed, child_path)

    # thin passthroughs to the numpy generator

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self.generator.normal(loc, scale, size)

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def integers(self, low, high=None, size=None):
        return self.generator.integers(low, high, size)

    def permutation(self, n):
        return self.generator.permutation(n)

    def choice(self, a, size=None, replace=True):
        return self.generator.choice(a, size=size, replace=replace)
