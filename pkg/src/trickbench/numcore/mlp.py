"""Multilayer perceptron on top of the tensor core.

Three entry points matter:
  * mlp_forward     -- taped forward pass (for losses / backward)
  * mlp_forward_np  -- plain numpy inference (hot rollout path, no tape)
  * mlp_jvp         -- forward-mode directional derivative wrt parameters
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import DimensionError, Tensor, linear, relu, tanh

ACTIVATIONS = ("tanh", "relu", "linear")


@dataclass
class Layer:
    weight: Tensor  # (fan_out, fan_in)
    bias: Tensor    # (fan_out,)
    activation: str

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weight.data.ndim != 2 or self.bias.data.ndim != 1:
            raise DimensionError("weight must be 2-D, bias 1-D")
        if self.bias.data.shape[0] != self.weight.data.shape[0]:
            raise DimensionError("bias length must equal weight fan_out")


@dataclass
class MlpParams:
    layers: list[Layer] = field(default_factory=list)

    def __post_init__(self):
        for a, b in zip(self.layers, self.layers[1:]):
            if a.weight.data.shape[0] != b.weight.data.shape[1]:
                raise DimensionError("consecutive layer dimensions must chain")

    @property
    def fan_in(self):
        return self.layers[0].weight.data.shape[1]

    @property
    def fan_out(self):
        return self.layers[-1].weight.data.shape[0]

    def parameters(self) -> list[Tensor]:
        out = []
        for layer in self.layers:
            out.append(layer.weight)
            out.append(layer.bias)
        return out

    def zero_grad(self):
        for p in self.parameters():
            p.grad = None

    def copy(self, requires_grad=False) -> "MlpParams":
        return MlpParams([
            Layer(Tensor(l.weight.data.copy(), requires_grad=requires_grad),
                  Tensor(l.bias.data.copy(), requires_grad=requires_grad),
                  l.activation)
            for l in self.layers
        ])


def mlp_params(sizes, hidden_activation, output_activation="linear",
               requires_grad=True) -> MlpParams:
    """Zero-initialized MLP with the given layer sizes, e.g. (5, 64, 64, 1)."""
    layers = []
    for i, (fi, fo) in enumerate(zip(sizes, sizes[1:])):
        act = output_activation if i == len(sizes) - 2 else hidden_activation
        layers.append(Layer(Tensor(np.zeros((fo, fi)), requires_grad=requires_grad),
                            Tensor(np.zeros(fo), requires_grad=requires_grad), act))
    return MlpParams(layers)


def _activate(x: Tensor, activation: str) -> Tensor:
    if activation == "tanh":
        return tanh(x)
    if activation == "relu":
        return relu(x)
    return x


def mlp_forward(params: MlpParams, x) -> Tensor:
    """Taped forward pass; input is (n, fan_in) or (fan_in,)."""
    h = x if isinstance(x, Tensor) else Tensor(x)
    if h.data.shape[-1] != params.fan_in:
        raise DimensionError(
            f"input last dim {h.data.shape[-1]} != fan_in {params.fan_in}")
    for layer in params.layers:
        h = _activate(linear(h, layer.weight, layer.bias), layer.activation)
    return h


def mlp_forward_np(params: MlpParams, x: np.ndarray) -> np.ndarray:
    """Tape-free inference path."""
    h = np.asarray(x, dtype=np.float64)
    if h.shape[-1] != params.fan_in:
        raise DimensionError(
            f"input last dim {h.shape[-1]} != fan_in {params.fan_in}")
    for layer in params.layers:
        h = h @ layer.weight.data.T + layer.bias.data
        if layer.activation == "tanh":
            h = np.tanh(h)
        elif layer.activation == "relu":
            h = np.maximum(h, 0.0)
    return h


def mlp_jvp(params: MlpParams, x: np.ndarray, direction) -> Tensor:
    """Directional derivative of the network output wrt parameters.

    `direction` is a list of (d_weight, d_bias) arrays matching the layers.
    """
    if len(direction) != len(params.layers):
        raise DimensionError("direction must provide one (dW, db) per layer")
    h = np.asarray(x, dtype=np.float64)
    t = np.zeros_like(h)
    for layer, (dw, db) in zip(params.layers, direction):
        if dw.shape != layer.weight.data.shape or db.shape != layer.bias.data.shape:
            raise DimensionError("direction shapes must match parameter shapes")
        z = h @ layer.weight.data.T + layer.bias.data
        tz = h @ dw.T + db + t @ layer.weight.data.T
        if layer.activation == "tanh":
            a = np.tanh(z)
            t = tz * (1.0 - a * a)
            h = a
        elif layer.activation == "relu":
            t = tz * (z > 0.0)
            h = np.maximum(z, 0.0)
        else:
            h, t = z, tz
    return Tensor(t)
