"""Differentiable operations over :class:`Tensor`.

Every op computes its forward value with numpy and returns a backward rule
mapping the output gradient to one gradient per input (``None`` for inputs
that take no gradient). Reductions use numpy's pairwise summation in fixed
axis order, so results are deterministic for a given shape.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from src.exceptions import AllMasked, ShapeMismatch
from src.tensor.tensor import Tensor, as_tensor

Operand = Union[Tensor, float, int, np.ndarray]

# Additive mask value; masked softmax entries are then forced to exact zeros.
MASK_FILL = -1e9


@dataclass(frozen=True)
class RunMode:
    """Train/eval switch plus the RNG stream consumed by dropout."""
    training: bool = False
    rng: Optional[np.random.Generator] = None


EVAL = RunMode()


def _unbroadcast(grad: np.ndarray, shape) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def add(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)

    def backward(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return Tensor.from_op(a.values + b.values, (a, b), backward)


def sub(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)

    def backward(g):
        return _unbroadcast(g, a.shape), _unbroadcast(-g, b.shape)

    return Tensor.from_op(a.values - b.values, (a, b), backward)


def mul(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)

    def backward(g):
        return _unbroadcast(g * b.values, a.shape), _unbroadcast(g * a.values, b.shape)

    return Tensor.from_op(a.values * b.values, (a, b), backward)


def div(a: Operand, b: Operand) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)

    def backward(g):
        ga = g / b.values
        gb = -g * a.values / (b.values ** 2)
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return Tensor.from_op(a.values / b.values, (a, b), backward)


def neg(a: Tensor) -> Tensor:
    return Tensor.from_op(-a.values, (a,), lambda g: (-g,))


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product over the last two axes (leading axes broadcast)."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2 or a.shape[-1] != b.shape[-2]:
        raise ShapeMismatch(f"matmul inner extents differ: {a.shape} @ {b.shape}")

    def backward(g):
        ga = np.matmul(g, np.swapaxes(b.values, -1, -2))
        gb = np.matmul(np.swapaxes(a.values, -1, -2), g)
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return Tensor.from_op(np.matmul(a.values, b.values), (a, b), backward)


def transpose(a: Tensor, axes: Optional[Sequence[int]] = None) -> Tensor:
    axes = tuple(reversed(range(a.ndim))) if axes is None else tuple(axes)
    inverse = tuple(np.argsort(axes))
    return Tensor.from_op(
        np.transpose(a.values, axes), (a,), lambda g: (np.transpose(g, inverse),)
    )


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    original = a.shape
    return Tensor.from_op(
        a.values.reshape(shape), (a,), lambda g: (g.reshape(original),)
    )


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    try:
        values = np.concatenate([t.values for t in tensors], axis=axis)
    except ValueError as e:
        raise ShapeMismatch(f"cannot concatenate: {e}") from e
    splits = np.cumsum([t.shape[axis] for t in tensors])[:-1]

    def backward(g):
        return tuple(np.split(g, splits, axis=axis))

    return Tensor.from_op(values, tuple(tensors), backward)


def index(a: Tensor, key) -> Tensor:
    """Basic/advanced indexing; gradients scatter back with ``np.add.at``."""
    def backward(g):
        grad = np.zeros_like(a.values)
        np.add.at(grad, key, g)
        return (grad,)

    return Tensor.from_op(a.values[key], (a,), backward)


def take_rows(table: Tensor, ids: Sequence[int]) -> Tensor:
    """Embedding lookup: row ``ids[i]`` of ``table`` becomes output row i."""
    ids = np.asarray(ids, dtype=np.int64)

    def backward(g):
        grad = np.zeros_like(table.values)
        np.add.at(grad, ids, g)
        return (grad,)

    return Tensor.from_op(table.values[ids], (table,), backward)


def sum(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    def backward(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.shape).copy(),)

    return Tensor.from_op(a.values.sum(axis=axis, keepdims=keepdims), (a,), backward)


def mean(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    count = a.values.size if axis is None else np.prod(
        [a.shape[ax] for ax in np.atleast_1d(axis)]
    )
    return div(sum(a, axis=axis, keepdims=keepdims), float(count))


def exp(a: Tensor) -> Tensor:
    out = np.exp(a.values)
    return Tensor.from_op(out, (a,), lambda g: (g * out,))


def log(a: Tensor) -> Tensor:
    return Tensor.from_op(np.log(a.values), (a,), lambda g: (g / a.values,))


def relu(a: Tensor) -> Tensor:
    active = a.values > 0
    return Tensor.from_op(np.where(active, a.values, 0.0), (a,), lambda g: (g * active,))


def abs(a: Tensor) -> Tensor:
    # Subgradient +1 at zero.
    sign = np.where(a.values >= 0, 1.0, -1.0)
    return Tensor.from_op(np.abs(a.values), (a,), lambda g: (g * sign,))


def _check_mask(mask: np.ndarray, shape, axis: int) -> np.ndarray:
    mask = np.asarray(mask, dtype=bool)
    try:
        mask = np.broadcast_to(mask, shape)
    except ValueError as e:
        raise ShapeMismatch(f"mask shape {mask.shape} does not fit {shape}") from e
    if np.any(mask.all(axis=axis)):
        raise AllMasked("every position along the softmax axis is masked")
    return mask


def softmax(x: Tensor, axis: int = -1, mask=None) -> Tensor:
    """
    Exp-normalize along ``axis`` with max subtraction.

    Args:
        x: Scores
        axis: Axis that sums to one
        mask: Optional boolean array broadcastable to ``x``; True marks a
            position that must receive exactly zero weight

    Raises:
        AllMasked: If some slice along ``axis`` is masked everywhere
    """
    x = as_tensor(x)
    scores = x.values
    if mask is not None:
        mask = _check_mask(mask, scores.shape, axis)
        scores = np.where(mask, MASK_FILL, scores)
    shifted = scores - scores.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    if mask is not None:
        e = np.where(mask, 0.0, e)
    out = e / e.sum(axis=axis, keepdims=True)

    def backward(g):
        return (out * (g - (g * out).sum(axis=axis, keepdims=True)),)

    return Tensor.from_op(out, (x,), backward)


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    x = as_tensor(x)
    shifted = x.values - x.values.max(axis=axis, keepdims=True)
    out = shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    probs = np.exp(out)

    def backward(g):
        return (g - probs * g.sum(axis=axis, keepdims=True),)

    return Tensor.from_op(out, (x,), backward)


def cross_entropy(logits: Tensor, targets: Sequence[int]) -> Tensor:
    """Mean negative log-likelihood of ``targets`` under row-wise softmax(logits)."""
    targets = np.asarray(targets, dtype=np.int64)
    if logits.ndim != 2 or logits.shape[0] != len(targets):
        raise ShapeMismatch(
            f"cross_entropy expects [n x V] logits for {len(targets)} targets, got {logits.shape}"
        )
    rows = np.arange(len(targets))
    shifted = logits.values - logits.values.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = -log_probs[rows, targets].mean()

    def backward(g):
        grad = np.exp(log_probs)
        grad[rows, targets] -= 1.0
        return (grad * (g / len(targets)),)

    return Tensor.from_op(np.asarray(loss), (logits,), backward)


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = 1e-5) -> Tensor:
    """Standardize the last axis (population variance), then ``gain * . + bias``."""
    d = x.shape[-1]
    if gain.shape != (d,) or bias.shape != (d,):
        raise ShapeMismatch(
            f"layer_norm over width {d} got gain {gain.shape} and bias {bias.shape}"
        )
    if eps <= 0:
        raise ValueError("eps must be positive")
    centered = x.values - x.values.mean(axis=-1, keepdims=True)
    inv_std = 1.0 / np.sqrt((centered ** 2).mean(axis=-1, keepdims=True) + eps)
    normed = centered * inv_std
    out = normed * gain.values + bias.values
    lead = tuple(range(x.ndim - 1))

    def backward(g):
        g_normed = g * gain.values
        gx = inv_std * (
            g_normed
            - g_normed.mean(axis=-1, keepdims=True)
            - normed * (g_normed * normed).mean(axis=-1, keepdims=True)
        )
        return gx, (g * normed).sum(axis=lead), g.sum(axis=lead)

    return Tensor.from_op(out, (x, gain, bias), backward)


def dropout(x: Tensor, rate: float, mode: RunMode = EVAL) -> Tensor:
    """Inverted dropout: identity in eval mode, ``x * keep / (1 - rate)`` in training."""
    if not mode.training or rate <= 0.0:
        return x
    if mode.rng is None:
        raise ValueError("training-mode dropout needs an RNG stream")
    keep = (mode.rng.random(x.shape) >= rate) / (1.0 - rate)
    return Tensor.from_op(x.values * keep, (x,), lambda g: (g * keep,))
