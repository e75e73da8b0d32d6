"""Percentile bootstrap of the mean.

Matches the experiment harness convention exactly so the plotted band equals
the harness's own interval computation: a Philox generator keyed by
sha256("0/bootstrap"), 10000 resamples, 95% percentile interval.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _bootstrap_generator():
    digest = hashlib.sha256(b"0/bootstrap").digest()
    key = [int.from_bytes(digest[i:i + 8], "little") for i in range(0, 16, 8)]
    return np.random.Generator(np.random.Philox(key=key))


def bootstrap_band(samples, level: float = 0.95, n_resamples: int = 10000,
                   generator=None):
    """(point, lower, upper) for the mean of `samples`."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise ValueError("bootstrap needs at least one sample")
    gen = generator if generator is not None else _bootstrap_generator()
    point = float(x.mean())
    idx = gen.integers(0, x.size, size=(n_resamples, x.size))
    means = x[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    lower = float(np.quantile(means, alpha))
    upper = float(np.quantile(means, 1.0 - alpha))
    return point, min(lower, point), max(upper, point)
