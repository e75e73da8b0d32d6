"""Running input normalization.

Welford's single-pass recursion maintains per-dimension mean and the sum of
squared deviations m2; states are standardized with the current estimates.
The literal variance recursion that divides each Welford increment by n is
kept behind a flag for comparison -- it does not recover the true variance
and is never used by the agents.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EPS = 1e-8


@dataclass
class RunningStats:
    """Welford accumulator over vectors of fixed dimension.

    With `literal_recursion` set, `m2` stores the variance estimate itself,
    updated by sigma2 += (s - mu_old) * (s - mu_new) / n at every step.
    """

    dim: int
    literal_recursion: bool = False
    n: int = 0
    mean: np.ndarray = field(default=None)
    m2: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.mean is None:
            self.mean = np.zeros(self.dim)
        if self.m2 is None:
            self.m2 = np.zeros(self.dim)

    @property
    def variance(self) -> np.ndarray:
        if self.n <= 1:
            return np.ones(self.dim)
        if self.literal_recursion:
            return self.m2.copy()
        return self.m2 / self.n

    @property
    def std(self) -> np.ndarray:
        return np.sqrt(self.variance)

    def to_dict(self) -> dict:
        return {"n": self.n, "mean": self.mean.tolist(), "m2": self.m2.tolist(),
                "literal_recursion": self.literal_recursion}

    @classmethod
    def from_dict(cls, d: dict) -> "RunningStats":
        stats = cls(dim=len(d["mean"]),
                    literal_recursion=d.get("literal_recursion", False))
        stats.n = int(d["n"])
        stats.mean = np.asarray(d["mean"], dtype=np.float64)
        stats.m2 = np.asarray(d["m2"], dtype=np.float64)
        return stats

    def copy(self) -> "RunningStats":
        return RunningStats.from_dict(self.to_dict())


def welford_update(stats: RunningStats, sample) -> RunningStats:
    """Fold one sample into the running estimates (in place)."""
    s = np.asarray(sample, dtype=np.float64)
    if s.shape != (stats.dim,):
        raise ValueError(f"sample shape {s.shape} != ({stats.dim},)")
    stats.n += 1
    delta = s - stats.mean
    stats.mean += delta / stats.n
    delta2 = s - stats.mean
    if stats.literal_recursion:
        stats.m2 += delta * delta2 / stats.n
    else:
        stats.m2 += delta * delta2
    return stats


def normalize_state(stats: RunningStats, s) -> np.ndarray:
    """Standardize s with the current estimates; EPS guards zero variance."""
    s = np.asarray(s, dtype=np.float64)
    if s.shape[-1] != stats.dim:
        raise ValueError(f"state dim {s.shape[-1]} != {stats.dim}")
    return (s - stats.mean) / np.maximum(stats.std, EPS)


def denormalize_state(stats: RunningStats, s_norm) -> np.ndarray:
    return np.asarray(s_norm) * np.maximum(stats.std, EPS) + stats.mean
