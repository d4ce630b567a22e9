import logging
from typing import Callable

import numpy as np

from src.tensor.tensor import Tensor, no_grad

logger = logging.getLogger(__name__)


def grad_check(f: Callable[[Tensor], Tensor], x: Tensor, eps: float = 1e-5) -> float:
    """
    Compare backward-computed gradients with central differences.

    ``f`` is evaluated with ``x`` itself, perturbing one element of
    ``x.values`` in place at a time (restored afterwards), so closures over
    model parameters can be checked by passing the parameter as ``x``.

    Args:
        f: Scalar-valued function of ``x``
        x: Point of evaluation
        eps: Finite-difference half step

    Returns:
        Worst elementwise relative error, with denominator
        max(|analytic|, |numeric|, 1e-8); infinity if ``f`` went non-finite
    """
    if eps <= 0:
        raise ValueError("eps must be positive")

    saved_grad, saved_flag = x.grad, x.requires_grad
    x.grad, x.requires_grad = None, True
    try:
        f(x).backward()
        analytic = x.grad if x.grad is not None else np.zeros_like(x.values)
    finally:
        x.grad, x.requires_grad = saved_grad, saved_flag

    numeric = np.empty_like(x.values)
    with no_grad():
        for idx in np.ndindex(*x.shape):
            original = x.values[idx]
            x.values[idx] = original + eps
            f_plus = f(x).item()
            x.values[idx] = original - eps
            f_minus = f(x).item()
            x.values[idx] = original
            numeric[idx] = (f_plus - f_minus) / (2.0 * eps)

    if not (np.all(np.isfinite(numeric)) and np.all(np.isfinite(analytic))):
        logger.warning("Non-finite values during gradient check of %s", x)
        return float("inf")

    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    error = float(np.max(np.abs(analytic - numeric) / denom)) if x.size else 0.0
    logger.debug("Gradient check of %s: max relative error %.3e", x, error)
    return error
