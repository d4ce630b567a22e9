import numpy as np
import pytest

from src.config import TrainConfig
from src.exceptions import NonFiniteGradient, ShapeMismatch
from src.tensor import Tensor
from src.training import RAdamState, clip_gradients, global_norm, lr_at_step, radam_step

def test_schedule_endpoints():
    cfg = TrainConfig()
    assert lr_at_step(0, cfg) == pytest.approx(1e-9)
    assert lr_at_step(16000, cfg) == pytest.approx(0.001)
    assert lr_at_step(8000, cfg) == pytest.approx(0.0005, rel=1e-5)
    assert lr_at_step(300000, cfg) == 0.001

def test_schedule_is_monotone():
    cfg = TrainConfig(warmup_steps=100)
    rates = [lr_at_step(t, cfg) for t in range(150)]
    assert all(a <= b for a, b in zip(rates, rates[1:]))
    assert rates[100:] == [cfg.peak_lr] * 50

def test_schedule_rejects_negative_step():
    with pytest.raises(ValueError):
        lr_at_step(-1, TrainConfig())

def test_clip_leaves_small_norm_alone():
    grads = {"a": np.array([0.6, 0.8])}
    clipped = clip_gradients(grads, 2.0)
    np.testing.assert_array_equal(clipped["a"], grads["a"])
    assert clipped["a"] is not grads["a"]

def test_clip_scales_to_max_norm():
    clipped = clip_gradients({"a": np.array([3.0, 4.0])}, 2.0)
    np.testing.assert_allclose(clipped["a"], [1.2, 1.6])

def test_clip_never_exceeds_max_norm():
    rng = np.random.default_rng(0)
    for _ in range(20):
        grads = {"a": rng.normal(size=(3, 4)) * 10, "b": rng.normal(size=5)}
        assert global_norm(clip_gradients(grads, 2.0)) <= 2.0 + 1e-9

def test_clip_rejects_nan():
    with pytest.raises(NonFiniteGradient):
        clip_gradients({"a": np.array([1.0, np.nan])}, 2.0)

def test_clip_rejects_non_positive_norm():
    with pytest.raises(ValueError):
        clip_gradients({"a": np.ones(2)}, 0.0)

def test_first_radam_step_is_plain_momentum():
    state = RAdamState()
    assert state.rho_inf == pytest.approx(1999.0)
    assert state.rho(1) == pytest.approx(1.0)
    x = Tensor(np.array([0.5]), requires_grad=True)
    radam_step({"x": x}, {"x": np.array([1.0])}, state, lr=0.01)
    assert x.values[0] == pytest.approx(0.49)
    assert state.step == 1

def test_zero_gradient_keeps_parameters():
    x = Tensor(np.array([1.0, -2.0]), requires_grad=True)
    state = RAdamState()
    for _ in range(10):
        radam_step({"x": x}, {"x": np.zeros(2)}, state, lr=0.1)
    np.testing.assert_array_equal(x.values, [1.0, -2.0])

def test_missing_gradient_is_zero():
    x = Tensor(np.array([1.0]), requires_grad=True)
    radam_step({"x": x}, {}, RAdamState(), lr=0.1)
    assert x.values[0] == 1.0

def test_minimizes_quadratic():
    x = Tensor(np.array([5.0]), requires_grad=True)
    state = RAdamState()
    for _ in range(200):
        radam_step({"x": x}, {"x": 2.0 * x.values}, state, lr=0.1)
    assert abs(x.values[0]) < 0.5

def test_radam_shape_checks():
    x = Tensor(np.zeros(2), requires_grad=True)
    with pytest.raises(ShapeMismatch):
        radam_step({"x": x}, {"x": np.zeros(3)}, RAdamState(), lr=0.1)
    with pytest.raises(ValueError):
        radam_step({"x": x}, {"x": np.zeros(2)}, RAdamState(), lr=-1.0)

def test_state_validation():
    with pytest.raises(ValueError):
        RAdamState(beta1=1.0)
    state = RAdamState.from_config(TrainConfig(peak_lr=0.0001, beta2=0.99))
    assert (state.base_lr, state.beta2, state.step) == (0.0001, 0.99, 0)
