from typing import Dict, Mapping

import numpy as np

from src.exceptions import NonFiniteGradient


def global_norm(grads: Mapping[str, np.ndarray]) -> float:
    """L2 norm over all gradients taken together."""
    return float(np.sqrt(sum(float(np.sum(np.square(g))) for g in grads.values())))


def clip_gradients(grads: Mapping[str, np.ndarray], max_norm: float) -> Dict[str, np.ndarray]:
    """
    Scale every gradient by ``max_norm / norm`` when the global norm exceeds ``max_norm``.

    Returns:
        New dict; the input arrays are not modified

    Raises:
        NonFiniteGradient: If any entry is NaN or infinite
    """
    if max_norm <= 0:
        raise ValueError(f"max_norm must be positive, got {max_norm}")
    for name, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradient(f"non-finite gradient for {name}")
    norm = global_norm(grads)
    if norm <= max_norm:
        return {name: np.array(g, dtype=np.float64) for name, g in grads.items()}
    scale = max_norm / norm
    return {name: np.asarray(g, dtype=np.float64) * scale for name, g in grads.items()}
