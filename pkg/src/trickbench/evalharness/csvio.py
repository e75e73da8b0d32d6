"""CSV schemas for learning curves and per-update diagnostics.

Floats are written with 17 significant digits so round-trips are exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass


@dataclass
class CurveRecord:
    seed: int
    episode: int
    steps: int
    mean_return: float
    mean_kl: float
    lr: float


CURVE_HEADER = ["seed", "episode", "steps", "return", "mean_kl", "lr"]
DIAG_HEADER = ["step", "epoch", "kl", "grad_norm_pre_clip", "learning_rate",
               "surrogate", "accepted", "analytic_kl"]


def _fmt(x):
    return f"{x:.17g}"


def write_curves_csv(records, path):
    """Rows sorted seed-major, episode-minor."""
    records = sorted(records, key=lambda r: (r.seed, r.episode))
    if not records:
        raise ValueError("no records to write")
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CURVE_HEADER)
        for r in records:
            w.writerow([r.seed, r.episode, r.steps, _fmt(r.mean_return),
                        _fmt(r.mean_kl), _fmt(r.lr)])


def read_curves_csv(path):
    records = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != CURVE_HEADER:
            raise ValueError(f"unexpected curve CSV header: {header}")
        for row in reader:
            records.append(CurveRecord(int(row[0]), int(row[1]), int(row[2]),
                                       float(row[3]), float(row[4]), float(row[5])))
    return records


def write_diag_csv(rows, path):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(DIAG_HEADER)
        for r in rows:
            w.writerow([r["step"], r["epoch"], _fmt(r["kl"]),
                        _fmt(r["grad_norm_pre_clip"]), _fmt(r["learning_rate"]),
                        _fmt(r["surrogate"]), r.get("accepted", ""),
                        _fmt(r.get("analytic_kl", 0.0))])


def read_diag_csv(path):
    rows = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if header != DIAG_HEADER:
            raise ValueError(f"unexpected diagnostics CSV header: {header}")
        for row in reader:
            rows.append({"step": int(row[0]), "epoch": int(row[1]),
                         "kl": float(row[2]),
                         "grad_norm_pre_clip": float(row[3]),
                         "learning_rate": float(row[4]),
                         "surrogate": float(row[5]), "accepted": row[6],
                         "analytic_kl": float(row[7])})
    return rows
