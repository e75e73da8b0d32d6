from .tensor import (
    DimensionError,
    NumericError,
    Tensor,
    add,
    clip,
    concat,
    div,
    exp,
    linear,
    log,
    matmul,
    minimum,
    mul,
    neg,
    powi,
    relu,
    tanh,
    tmean,
    tsum,
)
from .mlp import ACTIVATIONS, Layer, MlpParams, mlp_forward, mlp_forward_np, mlp_jvp, mlp_params
from .optim import AdamState, adam_init, adam_step
from .rng import SeededRng

__all__ = [
    "ACTIVATIONS", "AdamState", "DimensionError", "Layer", "MlpParams",
    "NumericError", "SeededRng", "Tensor", "adam_init", "adam_step", "add",
    "clip", "concat", "div", "exp", "linear", "log", "matmul", "minimum",
    "mlp_forward", "mlp_forward_np", "mlp_jvp", "mlp_params", "mul", "neg",
    "powi", "relu", "tanh", "tmean", "tsum",
]
