import numpy as np
import pytest

from src.tensor import Tensor, cross_entropy, grad_check, layer_norm, softmax
from src.tensor import ops

def test_quadratic_is_essentially_exact():
    assert grad_check(lambda x: x * x, Tensor(3.0)) < 1e-8

def test_layer_norm_softmax_cross_entropy_chain():
    rng = np.random.default_rng(0)
    gain = Tensor(rng.uniform(0.5, 1.5, size=8))
    bias = Tensor(rng.normal(size=8))
    w = Tensor(rng.normal(size=(8, 5)))
    targets = [1, 0, 4, 2]

    def f(x):
        probs = softmax(layer_norm(x, gain, bias) @ w)
        return -ops.mean(ops.log(probs[np.arange(4), targets]))

    assert grad_check(f, Tensor(rng.normal(size=(4, 8)))) < 1e-4
    assert grad_check(lambda x: cross_entropy(layer_norm(x, gain, bias) @ w, targets),
                      Tensor(rng.normal(size=(4, 8)))) < 1e-4

def test_nondifferentiable_point_reports_large_error():
    error = grad_check(lambda x: ops.abs(x), Tensor(0.0))
    assert error > 0.5

def test_non_finite_function_reports_infinity():
    assert grad_check(lambda x: ops.log(x), Tensor(0.0)) == float("inf")

def test_restores_state_of_checked_tensor():
    x = Tensor(np.array([1.0, 2.0]))
    before = x.values.copy()
    grad_check(lambda t: ops.sum(t * t), x)
    assert not x.requires_grad
    assert x.grad is None
    np.testing.assert_array_equal(x.values, before)

def test_rejects_non_positive_eps():
    with pytest.raises(ValueError):
        grad_check(lambda x: x * x, Tensor(1.0), eps=0.0)
