from __future__ import annotations

from dataclasses import dataclass, field

KINDS = ("curves", "kl_trace", "action_density")


@dataclass
class PlotSpec:
    """What to draw: labelled input CSVs, a figure kind and an output path."""

    inputs: list  # [(csv_path, label), ...]
    kind: str
    out_path: str
    threshold: float | None = None

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; "
                             f"expected one of {KINDS}")
        self.inputs = [tuple(pair) for pair in self.inputs]
        for pair in self.inputs:
            if len(pair) != 2:
                raise ValueError(f"inputs must be (path, label) pairs, got {pair!r}")
