from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import read_curves, read_density
from .spec import PlotSpec
from .stats import bootstrap_band

# fixed metadata so identical inputs give byte-identical PNGs
_PNG_METADATA = {"Software": "plotkit"}


def curve_series(by_seed, column):
    """Across-seed aggregation at every evaluation episode.

    `column` is 1 for return, 2 for mean KL. Returns (episodes, means,
    lowers, uppers); the band is the harness-convention bootstrap 95% CI and
    collapses onto the mean when only one seed is present.
    """
    pooled = {}
    for runs in by_seed.values():
        for row in runs:
            pooled.setdefault(row[0], []).append(row[column])
    episodes = sorted(pooled)
    means, lowers, uppers = [], [], []
    for ep in episodes:
        point, lo, hi = bootstrap_band(pooled[ep])
        means.append(point)
        lowers.append(lo)
        uppers.append(hi)
    return (np.array(episodes), np.array(means),
            np.array(lowers), np.array(uppers))


def _plot_curve_inputs(ax, inputs, column, ylabel):
    for path, label in inputs:
        episodes, mean, lo, hi = curve_series(read_curves(path), column)
        line, = ax.plot(episodes, mean, label=label)
        ax.fill_between(episodes, lo, hi, color=line.get_color(), alpha=0.25,
                        linewidth=0)
    ax.set_xlabel("episode")
    ax.set_ylabel(ylabel)


def render(spec: PlotSpec):
    """Draw the figure described by `spec`, save it, and return it."""
    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    if spec.kind == "curves":
        _plot_curve_inputs(ax, spec.inputs, column=1, ylabel="mean return")
    elif spec.kind == "kl_trace":
        _plot_curve_inputs(ax, spec.inputs, column=2, ylabel="mean KL divergence")
        if spec.threshold is not None:
            ax.axhline(spec.threshold, linestyle="--", color="black",
                       linewidth=1, label=f"threshold {spec.threshold:g}")
    else:  # action_density
        for path, label in spec.inputs:
            centers, density = read_density(path)
            ax.plot(centers, density, label=label)
        ax.set_xlabel("action")
        ax.set_ylabel("density")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(spec.out_path, metadata=_PNG_METADATA)
    plt.close(fig)
    return fig
