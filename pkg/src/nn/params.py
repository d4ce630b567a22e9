from dataclasses import fields, is_dataclass
from typing import Dict, Iterator, Tuple

import numpy as np

from src.tensor import Tensor


class ParamGroup:
    """Mixin for dataclasses holding Tensors, nested groups, or lists of groups."""

    def named_parameters(self, prefix: str = "") -> Iterator[Tuple[str, Tensor]]:
        for f in fields(self):
            value = getattr(self, f.name)
            name = f"{prefix}{f.name}"
            yield from _walk(value, name)

    def parameters(self) -> list:
        return [p for _, p in self.named_parameters()]

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: p.values for name, p in self.named_parameters()}

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        for name, param in self.named_parameters():
            if name not in state:
                raise KeyError(f"missing parameter {name}")
            if state[name].shape != param.shape:
                raise ValueError(
                    f"parameter {name} has shape {param.shape}, state has {state[name].shape}"
                )
            param.values[...] = state[name]


def _walk(value, name: str):
    if isinstance(value, Tensor):
        yield name, value
    elif isinstance(value, ParamGroup) and is_dataclass(value):
        yield from value.named_parameters(prefix=f"{name}.")
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            yield from _walk(item, f"{name}.{i}")


def projection(rng: np.random.Generator, fan_in: int, fan_out: int) -> Tensor:
    """Normal(0, 1/sqrt(fan_in)) weight matrix."""
    return Tensor(rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out)), requires_grad=True)


def embedding(rng: np.random.Generator, rows: int, width: int, scale: float = 0.02) -> Tensor:
    return Tensor(rng.uniform(-scale, scale, size=(rows, width)), requires_grad=True)


def zeros(*shape: int) -> Tensor:
    return Tensor(np.zeros(shape), requires_grad=True)


def ones(*shape: int) -> Tensor:
    return Tensor(np.ones(shape), requires_grad=True)
