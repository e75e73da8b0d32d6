"""Adam with bias-corrected moments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mlp import MlpParams
from .tensor import NumericError, Tensor


def _param_list(params) -> list[Tensor]:
    if isinstance(params, MlpParams):
        return params.parameters()
    return list(params)


@dataclass
class AdamState:
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.0
    step_count: int = 0
    first_moment: list = field(default_factory=list)
    second_moment: list = field(default_factory=list)

    def __post_init__(self):
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("betas must lie in [0, 1)")
        if self.learning_rate <= 0.0:
            raise ValueError("learning rate must be positive")


def adam_init(params, learning_rate, **kwargs) -> AdamState:
    state = AdamState(learning_rate=learning_rate, **kwargs)
    for p in _param_list(params):
        state.first_moment.append(np.zeros_like(p.data))
        state.second_moment.append(np.zeros_like(p.data))
    return state


def adam_step(state: AdamState, params, grads=None):
    """One in-place Adam update; grads default to each parameter's .grad."""
    plist = _param_list(params)
    if grads is None:
        grads = [p.grad if p.grad is not None else np.zeros_like(p.data)
                 for p in plist]
    state.step_count += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1 ** state.step_count
    c2 = 1.0 - b2 ** state.step_count
    for i, (p, g) in enumerate(zip(plist, grads)):
        if not np.all(np.isfinite(g)):
            raise NumericError(f"non-finite gradient for parameter {i}")
        if state.weight_decay:
            g = g + state.weight_decay * p.data
        m = state.first_moment[i]
        v = state.second_moment[i]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        p.data -= state.learning_rate * (m / c1) / (np.sqrt(v / c2) + state.epsilon)
    return state
