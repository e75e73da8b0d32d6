"""Per-layer weight initialization schemes.

Sampling rules:
  lecun      uniform on [-sqrt(1/fan_in), +sqrt(1/fan_in)]
  xavier     uniform on [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))]
  kaiming    normal, std sqrt(2/fan_in) (ReLU gain baked in)
  orthogonal gain-scaled matrix with orthonormal rows (fan_out <= fan_in)
             or columns (fan_out > fan_in), Haar-distributed

Biases are always zero so the weight scheme is the only varying factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numcore import MlpParams, SeededRng, mlp_params

SCHEMES = ("lecun", "xavier", "kaiming", "orthogonal")


@dataclass
class InitScheme:
    kind: str
    gain: float = 1.0  # used by orthogonal only

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValueError(f"unknown init scheme {self.kind!r}")
        if self.gain <= 0.0:
            raise ValueError("gain must be positive")


def orthogonalize(gaussian_matrix: np.ndarray) -> np.ndarray:
    """Orthonormalize an i.i.d. Gaussian matrix via sign-corrected QR.

    Multiplying each column of Q by the sign of the matching diagonal entry
    of R makes the result Haar-uniform over the orthogonal group. Tall inputs
    get orthonormal columns, wide inputs orthonormal rows.
    """
    a = np.asarray(gaussian_matrix, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    rows, cols = a.shape
    if rows < cols:
        return orthogonalize(a.T).T
    q, r = np.linalg.qr(a)
    d = np.diagonal(r)
    if np.any(d == 0.0):
        raise np.linalg.LinAlgError("rank-deficient draw")
    return q * np.sign(d)


def init_layer(scheme: InitScheme, fan_in: int, fan_out: int,
               rng: SeededRng) -> np.ndarray:
    """Sample a (fan_out, fan_in) weight matrix under the given scheme."""
    if fan_in < 1 or fan_out < 1:
        raise ValueError("fan_in and fan_out must be >= 1")
    if scheme.kind == "lecun":
        bound = np.sqrt(1.0 / fan_in)
        return rng.uniform(-bound, bound, size=(fan_out, fan_in))
    if scheme.kind == "xavier":
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-bound, bound, size=(fan_out, fan_in))
    if scheme.kind == "kaiming":
        return rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
    # orthogonal; rank-deficient draws have probability zero but retry anyway
    while True:
        try:
            q = orthogonalize(rng.standard_normal((fan_out, fan_in)))
        except np.linalg.LinAlgError:
            continue
        return scheme.gain * q


def init_mlp(sizes, hidden_activation, scheme: InitScheme, rng: SeededRng,
             output_activation="linear") -> MlpParams:
    """Build an MLP with scheme-initialized weights and zero biases.

    The output layer is scheme-initialized like the hidden layers.
    """
    params = mlp_params(sizes, hidden_activation, output_activation)
    for i, layer in enumerate(params.layers):
        fo, fi = layer.weight.data.shape
        layer.weight.data[...] = init_layer(scheme, fi, fo, rng.derive(f"layer{i}"))
    return params
