"""Bootstrap confidence intervals and effect sizes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numcore import SeededRng


@dataclass
class CiResult:
    point: float
    lower: float
    upper: float
    n_resamples: int

    def __post_init__(self):
        if not self.lower <= self.point <= self.upper:
            raise ValueError("CI bounds must bracket the point estimate")

    def overlaps(self, other: "CiResult") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper


def bootstrap_ci(samples, level: float = 0.95, n_resamples: int = 10000,
                 rng: SeededRng = None) -> CiResult:
    """Percentile bootstrap of the mean."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise ValueError("bootstrap_ci needs at least one sample")
    rng = rng or SeededRng(0, "bootstrap")
    point = float(x.mean())
    idx = rng.integers(0, x.size, size=(n_resamples, x.size))
    means = x[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    lower = float(np.quantile(means, alpha))
    upper = float(np.quantile(means, 1.0 - alpha))
    # guard against floating noise putting the point outside degenerate CIs
    return CiResult(point, min(lower, point), max(upper, point), n_resamples)


def effect_size(group_a, group_b) -> float:
    """Cohen's d with pooled (n-1 denominator) standard deviation."""
    a = np.asarray(group_a, dtype=np.float64)
    b = np.asarray(group_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValueError("effect_size needs at least 2 samples per group")
    va, vb = a.var(ddof=1), b.var(ddof=1)
    pooled = np.sqrt(((a.size - 1) * va + (b.size - 1) * vb)
                     / (a.size + b.size - 2))
    if pooled == 0.0:
        raise ValueError("degenerate comparison: zero pooled std")
    return float((a.mean() - b.mean()) / pooled)
