"""Minimal dense float64 tensor with a reverse-mode tape.

The tape is rebuilt on every forward pass: each op records its parents and a
closure that accumulates gradients into them. Only what the agents need is
implemented (elementwise arithmetic, matmul/linear, tanh/relu/exp/log,
reductions, minimum, clip).
"""

from __future__ import annotations

import numpy as np


class NumericError(ValueError):
    """Raised when a NaN/Inf shows up where finite values are required."""


class DimensionError(ValueError):
    """Raised on shape mismatches between operands."""


def _unbroadcast(grad, shape):
    """Sum `grad` down to `shape`, undoing numpy broadcasting."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


class Tensor:
    """Dense float64 array participating in reverse-mode differentiation."""

    __slots__ = ("data", "requires_grad", "grad", "_parents", "_backward")

    def __init__(self, data, requires_grad=False, _parents=(), _backward=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad = None
        self._parents = _parents
        self._backward = _backward

    @property
    def shape(self):
        return self.data.shape

    @property
    def size(self):
        return self.data.size

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    def check_finite(self, what="tensor"):
        if not np.all(np.isfinite(self.data)):
            raise NumericError(f"non-finite values in {what}")
        return self

    def zero_grad(self):
        self.grad = None

    # -- autograd -----------------------------------------------------------

    def _on_tape(self):
        return self.requires_grad or self._parents

    def backward(self):
        """Populate .grad on every requires_grad leaf reachable from here.

        Must be called on a scalar (single-element) tensor. Repeated calls
        without zeroing grads accumulate.
        """
        if self.data.size != 1:
            raise DimensionError(
                f"backward requires a scalar loss, got shape {self.shape}")
        topo, seen = [], set()
        stack = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(topo):
            g = grads.pop(id(node), None)
            if g is None:
                continue
            if node.requires_grad:
                if node.grad is None:
                    node.grad = np.zeros_like(node.data)
                node.grad += g
            if node._backward is not None:
                for parent, pg in node._backward(g):
                    if not parent._on_tape():
                        continue
                    acc = grads.get(id(parent))
                    if acc is None:
                        grads[id(parent)] = pg.copy() if pg.base is not None or pg is g else pg
                    else:
                        acc += pg

    # -- operators ----------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return neg(self)

    def __sub__(self, other):
        return add(self, neg(_as_tensor(other)))

    def __rsub__(self, other):
        return add(_as_tensor(other), neg(self))

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(_as_tensor(other), self)

    def __matmul__(self, other):
        return matmul(self, other)

    def __pow__(self, p):
        return powi(self, p)

    def sum(self, axis=None, keepdims=False):
        return tsum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        return tmean(self, axis=axis, keepdims=keepdims)


def _as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _node(data, parents, backward):
    taped = any(p._on_tape() for p in parents)
    if not taped:
        return Tensor(data)
    return Tensor(data, _parents=tuple(parents), _backward=backward)


def add(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    out = a.data + b.data

    def backward(g):
        return ((a, _unbroadcast(g, a.data.shape)),
                (b, _unbroadcast(g, b.data.shape)))

    return _node(out, (a, b), backward)


def neg(a):
    a = _as_tensor(a)
    return _node(-a.data, (a,), lambda g: ((a, -g),))


def mul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    out = a.data * b.data

    def backward(g):
        return ((a, _unbroadcast(g * b.data, a.data.shape)),
                (b, _unbroadcast(g * a.data, b.data.shape)))

    return _node(out, (a, b), backward)


def div(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    out = a.data / b.data

    def backward(g):
        return ((a, _unbroadcast(g / b.data, a.data.shape)),
                (b, _unbroadcast(-g * a.data / (b.data * b.data), b.data.shape)))

    return _node(out, (a, b), backward)


def powi(a, p):
    a = _as_tensor(a)
    out = a.data ** p
    return _node(out, (a,), lambda g: ((a, g * p * a.data ** (p - 1)),))


def matmul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2:
        raise DimensionError("matmul expects 2-D operands")
    if a.data.shape[1] != b.data.shape[0]:
        raise DimensionError(
            f"matmul inner dims differ: {a.data.shape} @ {b.data.shape}")
    out = a.data @ b.data

    def backward(g):
        return ((a, g @ b.data.T), (b, a.data.T @ g))

    return _node(out, (a, b), backward)


def linear(x, w, b):
    """Affine map x @ w.T + b with weight of shape (fan_out, fan_in).

    x may be (n, fan_in) or (fan_in,).
    """
    x, w, b = _as_tensor(x), _as_tensor(w), _as_tensor(b)
    xd = x.data
    single = xd.ndim == 1
    x2 = xd[None, :] if single else xd
    if x2.shape[1] != w.data.shape[1]:
        raise DimensionError(
            f"linear input dim {x2.shape[1]} != fan_in {w.data.shape[1]}")
    out = x2 @ w.data.T + b.data
    if single:
        out = out[0]

    def backward(g):
        g2 = g[None, :] if single else g
        gx = g2 @ w.data
        if single:
            gx = gx[0]
        return ((x, gx), (w, g2.T @ x2), (b, g2.sum(axis=0)))

    return _node(out, (x, w, b), backward)


def tanh(a):
    a = _as_tensor(a)
    out = np.tanh(a.data)
    return _node(out, (a,), lambda g: ((a, g * (1.0 - out * out)),))


def relu(a):
    a = _as_tensor(a)
    out = np.maximum(a.data, 0.0)
    return _node(out, (a,), lambda g: ((a, g * (a.data > 0.0)),))


def exp(a):
    a = _as_tensor(a)
    out = np.exp(a.data)
    return _node(out, (a,), lambda g: ((a, g * out),))


def log(a):
    a = _as_tensor(a)
    out = np.log(a.data)
    return _node(out, (a,), lambda g: ((a, g / a.data),))


def minimum(a, b):
    """Elementwise min; gradient routes to the smaller operand (ties to a)."""
    a, b = _as_tensor(a), _as_tensor(b)
    take_a = a.data <= b.data
    out = np.where(take_a, a.data, b.data)

    def backward(g):
        return ((a, _unbroadcast(g * take_a, a.data.shape)),
                (b, _unbroadcast(g * ~take_a, b.data.shape)))

    return _node(out, (a, b), backward)


def clip(a, lo, hi):
    """Clamp to constant bounds; gradient is zero outside [lo, hi]."""
    a = _as_tensor(a)
    out = np.clip(a.data, lo, hi)
    inside = (a.data >= lo) & (a.data <= hi)
    return _node(out, (a,), lambda g: ((a, g * inside),))


def tsum(a, axis=None, keepdims=False):
    a = _as_tensor(a)
    out = a.data.sum(axis=axis, keepdims=keepdims)

    def backward(g):
        if axis is None:
            return ((a, np.broadcast_to(g, a.data.shape)),)
        g2 = g if keepdims else np.expand_dims(g, axis)
        return ((a, np.broadcast_to(g2, a.data.shape)),)

    return _node(out, (a,), backward)


def tmean(a, axis=None, keepdims=False):
    a = _as_tensor(a)
    n = a.data.size if axis is None else a.data.shape[axis]
    return mul(tsum(a, axis=axis, keepdims=keepdims), 1.0 / n)


def concat(tensors, axis=0):
    tensors = [_as_tensor(t) for t in tensors]
    out = np.concatenate([t.data for t in tensors], axis=axis)
    offsets = np.cumsum([0] + [t.data.shape[axis] for t in tensors])

    def backward(g):
        pieces = []
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            idx = [slice(None)] * g.ndim
            idx[axis] = slice(lo, hi)
            pieces.append((t, g[tuple(idx)]))
        return tuple(pieces)

    return _node(out, tuple(tensors), backward)
