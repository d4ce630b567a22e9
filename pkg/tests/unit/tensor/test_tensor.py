import threading

import numpy as np
import pytest

from src.exceptions import NotScalar
from src.tensor import Tensor, no_grad, is_grad_enabled, zero_grads, softmax
from src.tensor import ops

def test_square_gradient():
    x = Tensor(3.0, requires_grad=True)
    (x * x).backward()
    assert x.grad == pytest.approx(6.0)

def test_backward_twice_doubles_leaf_grads_exactly():
    x = Tensor(np.array([0.3, -1.2, 2.0]), requires_grad=True)
    loss = ops.sum(ops.exp(x) * x)
    loss.backward()
    first = x.grad.copy()
    loss.backward()
    assert np.array_equal(x.grad, 2 * first)

def test_zero_grads_clears_accumulation():
    x = Tensor(np.ones(2), requires_grad=True)
    ops.sum(x * 2.0).backward()
    zero_grads([x])
    assert x.grad is None

def test_sum_of_softmax_has_zero_gradient():
    x = Tensor(np.array([0.5, -1.0, 2.0, 0.1]), requires_grad=True)
    ops.sum(softmax(x)).backward()
    np.testing.assert_allclose(x.grad, np.zeros(4), atol=1e-12)

def test_backward_requires_scalar():
    x = Tensor(np.ones(3), requires_grad=True)
    with pytest.raises(NotScalar):
        (x * 2.0).backward()

def test_item_requires_single_element():
    assert Tensor([[4.0]]).item() == 4.0
    with pytest.raises(NotScalar):
        Tensor([1.0, 2.0]).item()

def test_broadcast_add_unbroadcasts_gradient():
    x = Tensor(np.ones((3, 2)), requires_grad=True)
    b = Tensor(np.zeros(2), requires_grad=True)
    ops.sum(x + b).backward()
    np.testing.assert_array_equal(b.grad, [3.0, 3.0])
    np.testing.assert_array_equal(x.grad, np.ones((3, 2)))

def test_shared_subexpression_accumulates_both_paths():
    x = Tensor(2.0, requires_grad=True)
    y = x * 3.0
    (y * y + y).backward()
    # d/dx (9x^2 + 3x) = 18x + 3
    assert x.grad == pytest.approx(39.0)

def test_no_grad_builds_no_graph():
    x = Tensor(np.ones(2), requires_grad=True)
    with no_grad():
        assert not is_grad_enabled()
        y = x * 2.0
    assert is_grad_enabled()
    assert not y.requires_grad
    assert y.is_leaf

def test_no_grad_is_per_thread():
    seen = []
    with no_grad():
        worker = threading.Thread(target=lambda: seen.append(is_grad_enabled()))
        worker.start()
        worker.join()
    assert seen == [True]

def test_deep_chain_does_not_hit_recursion_limit():
    x = Tensor(1.0, requires_grad=True)
    y = x
    for _ in range(5000):
        y = y + 0.0
    y.backward()
    assert x.grad == pytest.approx(1.0)
