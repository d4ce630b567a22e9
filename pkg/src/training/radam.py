"""Rectified Adam with bias-corrected moments and variance rectification."""
import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

import numpy as np

from src.config import TrainConfig
from src.exceptions import ShapeMismatch
from src.tensor import Tensor

# Rectification applies only once the SMA length exceeds this.
RECTIFY_THRESHOLD = 4.0


@dataclass
class RAdamState:
    """
    Optimizer state, keyed by parameter name.

    Attributes:
        step: Number of updates applied so far
        m: First-moment estimates
        v: Second-moment estimates
        beta1: First-moment decay
        beta2: Second-moment decay
        base_lr: Peak learning rate of the schedule driving this optimizer
        eps: Denominator stabilizer
    """
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    base_lr: float = 0.001
    eps: float = 1e-8
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.step < 0:
            raise ValueError("step must be non-negative")
        for name in ("beta1", "beta2"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")

    @classmethod
    def from_config(cls, cfg: TrainConfig) -> "RAdamState":
        return cls(beta1=cfg.beta1, beta2=cfg.beta2, base_lr=cfg.peak_lr, eps=cfg.eps)

    @property
    def rho_inf(self) -> float:
        return 2.0 / (1.0 - self.beta2) - 1.0

    def rho(self, t: int) -> float:
        beta2_t = self.beta2 ** t
        return self.rho_inf - 2.0 * t * beta2_t / (1.0 - beta2_t)


def radam_step(
    params: Mapping[str, Tensor],
    grads: Mapping[str, Optional[np.ndarray]],
    state: RAdamState,
    lr: float,
) -> RAdamState:
    """
    Apply one update to every parameter in place.

    A parameter without a gradient entry (or with ``None``) is updated with a
    zero gradient, so its moments still decay.

    Raises:
        ShapeMismatch: If a gradient or stored moment disagrees with its parameter
    """
    if lr < 0:
        raise ValueError(f"learning rate must be non-negative, got {lr}")
    t = state.step + 1
    b1, b2 = state.beta1, state.beta2
    rho_t = state.rho(t)
    rectified = rho_t > RECTIFY_THRESHOLD
    if rectified:
        rho_inf = state.rho_inf
        r_t = math.sqrt(
            ((rho_t - 4.0) * (rho_t - 2.0) * rho_inf)
            / ((rho_inf - 4.0) * (rho_inf - 2.0) * rho_t)
        )

    for name, param in params.items():
        grad = grads.get(name)
        grad = np.zeros_like(param.values) if grad is None else np.asarray(grad, dtype=np.float64)
        if grad.shape != param.shape:
            raise ShapeMismatch(f"gradient for {name} has shape {grad.shape}, parameter {param.shape}")
        m = state.m.get(name)
        v = state.v.get(name)
        if m is None:
            m, v = np.zeros_like(param.values), np.zeros_like(param.values)
        elif m.shape != param.shape or v.shape != param.shape:
            raise ShapeMismatch(f"optimizer moments for {name} do not match shape {param.shape}")

        m = b1 * m + (1.0 - b1) * grad
        v = b2 * v + (1.0 - b2) * grad * grad
        m_hat = m / (1.0 - b1 ** t)
        if rectified:
            v_hat = np.sqrt(v / (1.0 - b2 ** t))
            param.values -= lr * r_t * m_hat / (v_hat + state.eps)
        else:
            param.values -= lr * m_hat
        state.m[name], state.v[name] = m, v

    state.step = t
    return state
