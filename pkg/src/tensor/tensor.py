import threading
from contextlib import contextmanager
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import NotScalar

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

_state = threading.local()


def is_grad_enabled() -> bool:
    return getattr(_state, "grad_enabled", True)


@contextmanager
def no_grad():
    """Build no differentiation graph inside the block (per thread)."""
    previous = is_grad_enabled()
    _state.grad_enabled = False
    try:
        yield
    finally:
        _state.grad_enabled = previous


class Tensor:
    """
    Dense float64 array that records how it was computed.

    Leaves (parameters, inputs) have no backward rule; their ``grad`` accumulates
    across ``backward`` calls until ``zero_grad`` is called. Intermediate nodes
    never store gradients, so re-running ``backward`` on the same graph adds
    exactly the same contribution to each leaf again.

    Attributes:
        values: Row-major float64 array
        grad: Accumulated gradient of the same shape, or None
        requires_grad: Whether gradients flow into this tensor
        name: Optional label used by checkpoints and diagnostics
    """

    __array_priority__ = 100.0

    def __init__(
        self,
        values,
        requires_grad: bool = False,
        name: Optional[str] = None,
        _parents: Tuple["Tensor", ...] = (),
        _backward: Optional[BackwardFn] = None,
    ):
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.name = name
        self._parents = _parents
        self._backward = _backward

    @classmethod
    def from_op(
        cls,
        values: np.ndarray,
        parents: Tuple["Tensor", ...],
        backward: BackwardFn,
    ) -> "Tensor":
        """Create an op output, recording the graph edge only when needed."""
        if is_grad_enabled() and any(p.requires_grad for p in parents):
            return cls(values, requires_grad=True, _parents=parents, _backward=backward)
        return cls(values)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def is_leaf(self) -> bool:
        return self._backward is None

    def item(self) -> float:
        if self.values.size != 1:
            raise NotScalar(f"item() needs one element, tensor has shape {self.shape}")
        return float(self.values.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.values

    def detach(self) -> "Tensor":
        return Tensor(self.values)

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        """Accumulate d(self)/d(leaf) into every reachable leaf's ``grad``."""
        if self.values.size != 1:
            raise NotScalar(f"backward() needs a scalar loss, got shape {self.shape}")
        if not self.requires_grad:
            return

        pending = {id(self): np.ones_like(self.values)}
        for node in reversed(_topological_order(self)):
            grad = pending.pop(id(node), None)
            if grad is None:
                continue
            if node._backward is None:
                node.grad = grad.copy() if node.grad is None else node.grad + grad
                continue
            for parent, parent_grad in zip(node._parents, node._backward(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                if key in pending:
                    pending[key] = pending[key] + parent_grad
                else:
                    pending[key] = parent_grad

    # Operator sugar, implemented in src.tensor.ops
    def __add__(self, other):
        from src.tensor import ops
        return ops.add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        from src.tensor import ops
        return ops.sub(self, other)

    def __rsub__(self, other):
        from src.tensor import ops
        return ops.sub(other, self)

    def __mul__(self, other):
        from src.tensor import ops
        return ops.mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        from src.tensor import ops
        return ops.div(self, other)

    def __neg__(self):
        from src.tensor import ops
        return ops.neg(self)

    def __matmul__(self, other):
        from src.tensor import ops
        return ops.matmul(self, other)

    def __getitem__(self, index):
        from src.tensor import ops
        return ops.index(self, index)

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}{label}, requires_grad={self.requires_grad})"


def _topological_order(root: Tensor) -> list:
    """Iterative post-order over the graph (inputs before consumers)."""
    order = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in visited:
                stack.append((parent, False))
    return order


def zero_grads(params: Iterable[Tensor]) -> None:
    for param in params:
        param.zero_grad()


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)
