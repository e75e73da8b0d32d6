"""Readers for the two CSV schemas this tool understands.

Curve files:   seed,episode,steps,return,mean_kl,lr
Density files: bin_center,density

Parse failures name the offending file and row.
"""

from __future__ import annotations

import csv

CURVE_HEADER = ["seed", "episode", "steps", "return", "mean_kl", "lr"]
DENSITY_HEADER = ["bin_center", "density"]


class CsvFormatError(ValueError):
    pass


def _rows(path, expected_header):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(f"{path}: empty file") from None
        if header != expected_header:
            raise CsvFormatError(
                f"{path}: expected header {expected_header}, got {header}")
        for i, row in enumerate(reader, start=2):
            yield i, row


def read_curves(path):
    """Returns {seed: [(episode, return, mean_kl), ...]} sorted by episode."""
    by_seed = {}
    for i, row in _rows(path, CURVE_HEADER):
        try:
            seed, episode = int(row[0]), int(row[1])
            ret, kl = float(row[3]), float(row[4])
        except (ValueError, IndexError) as exc:
            raise CsvFormatError(f"{path}: malformed row {i}: {row}") from exc
        by_seed.setdefault(seed, []).append((episode, ret, kl))
    for runs in by_seed.values():
        runs.sort()
    return by_seed


def read_density(path):
    """Returns (bin_centers, densities) as parallel lists."""
    centers, densities = [], []
    for i, row in _rows(path, DENSITY_HEADER):
        try:
            centers.append(float(row[0]))
            densities.append(float(row[1]))
        except (ValueError, IndexError) as exc:
            raise CsvFormatError(f"{path}: malformed row {i}: {row}") from exc
    return centers, densities
