from .tensor import Tensor, no_grad, is_grad_enabled, zero_grads, as_tensor
from .ops import (
    RunMode,
    EVAL,
    matmul,
    softmax,
    log_softmax,
    layer_norm,
    cross_entropy,
    dropout,
    concat,
    take_rows,
    transpose,
    reshape,
    relu,
)
from .gradcheck import grad_check

__all__ = [
    'Tensor',
    'no_grad',
    'is_grad_enabled',
    'zero_grads',
    'as_tensor',
    'RunMode',
    'EVAL',
    'matmul',
    'softmax',
    'log_softmax',
    'layer_norm',
    'cross_entropy',
    'dropout',
    'concat',
    'take_rows',
    'transpose',
    'reshape',
    'relu',
    'grad_check'
]
