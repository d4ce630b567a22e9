import json

import numpy as np
import pytest

from src.config import ConfigLoader, DecodeConfig, TrainConfig
from src.exceptions import EmptyBatch
from src.interfaces.itraining_callback import ITrainingCallback
from src.model import HMNetModel, HMNetSummarizer
from src.training import (
    RAdamState, ResourceMonitor, StepReport, Trainer, accumulated_step, clip_gradients, radam_step,
)

@pytest.fixture
def features(featurizer, toy_meetings):
    return [featurizer.featurize(m) for m in toy_meetings]

def _fresh(tiny_model_config, featurizer):
    return HMNetModel.create(tiny_model_config, featurizer, seed=1)

def test_empty_batch(tiny_model):
    with pytest.raises(EmptyBatch):
        accumulated_step(tiny_model, [], RAdamState(), TrainConfig())

def test_step_report(tiny_model, features):
    state = RAdamState()
    report = accumulated_step(tiny_model, features[:2], state, TrainConfig())
    assert isinstance(report, StepReport)
    assert float(report) == report.loss > 0
    assert report.lr == pytest.approx(1e-9)
    assert state.step == 1
    assert all(p.grad is None for p in tiny_model.params.parameters())

def test_micro_batch_order_does_not_matter(tiny_model_config, featurizer, features):
    cfg = TrainConfig(warmup_steps=1, peak_lr=0.01, initial_lr=0.01)
    first, second = _fresh(tiny_model_config, featurizer), _fresh(tiny_model_config, featurizer)
    report_a = accumulated_step(first, [features[0], features[1]], RAdamState(), cfg)
    report_b = accumulated_step(second, [features[1], features[0]], RAdamState(), cfg)
    assert report_a.loss == pytest.approx(report_b.loss, abs=1e-12)
    a, b = first.params.state_dict(), second.params.state_dict()
    for name in a:
        np.testing.assert_allclose(a[name], b[name], rtol=0, atol=1e-10)

def test_accumulation_matches_mean_loss_step(tiny_model_config, featurizer, features):
    cfg = TrainConfig(warmup_steps=1, peak_lr=0.01, initial_lr=0.01)
    accumulated = _fresh(tiny_model_config, featurizer)
    accumulated_step(accumulated, features[:2], RAdamState(), cfg)

    manual = _fresh(tiny_model_config, featurizer)
    ((manual.loss(features[0]) + manual.loss(features[1])) * 0.5).backward()
    trainable = manual.params.trainable()
    grads = {name: p.grad if p.grad is not None else np.zeros_like(p.values) for name, p in trainable}
    grads = clip_gradients(grads, cfg.clip_norm)
    radam_step(dict(trainable), grads, RAdamState(), 0.01)

    a, b = accumulated.params.state_dict(), manual.params.state_dict()
    for name in a:
        np.testing.assert_allclose(a[name], b[name], rtol=0, atol=1e-10)

def test_batches_cover_each_epoch(tiny_model):
    trainer = Trainer(tiny_model, TrainConfig(accumulation_steps=3, seed=2))
    stream = trainer.batches(7)
    epoch = [next(stream) for _ in range(3)]
    assert [len(b) for b in epoch] == [3, 3, 1]
    assert sorted(np.concatenate(epoch).tolist()) == list(range(7))

def test_train_logs_and_fires_callbacks(mocker, tmp_path, tiny_model, features):
    callback = mocker.Mock(spec=ITrainingCallback)
    log_path = tmp_path / "logs" / "train.jsonl"
    cfg = TrainConfig(warmup_steps=10, accumulation_steps=2, checkpoint_every=2, max_steps=5)
    trainer = Trainer(tiny_model, cfg, callbacks=[callback], log_path=str(log_path))

    reports = trainer.train(features[:4])

    assert len(reports) == 5
    assert [c.args[0] for c in callback.on_checkpoint.call_args_list] == [2, 4, 5]
    records = [json.loads(line) for line in log_path.read_text().splitlines()]
    assert [r["step"] for r in records] == [1, 2, 3, 4, 5]
    assert set(records[0]) == {"step", "lr", "loss", "grad_norm"}
    assert records[0]["lr"] == pytest.approx(1e-9)

def test_train_rejects_empty_corpus(tiny_model):
    with pytest.raises(EmptyBatch):
        Trainer(tiny_model, TrainConfig()).train([])

def test_high_memory_is_reported(caplog, tiny_model, features):
    trainer = Trainer(tiny_model, TrainConfig(accumulation_steps=1),
                      resource_monitor=ResourceMonitor(warning_threshold_mb=0))
    with caplog.at_level("WARNING"):
        trainer.train(features[:1], max_steps=1)
    assert "High memory usage" in caplog.text

def test_resource_monitor_average():
    monitor = ResourceMonitor(history=2)
    assert monitor.get_average_step_time() is None
    for seconds in (1.0, 2.0, 4.0):
        monitor.record_step_time(seconds)
    assert monitor.get_average_step_time() == pytest.approx(3.0)

def test_overfits_single_meeting(tiny_model, features):
    cfg = TrainConfig(warmup_steps=1, peak_lr=0.01, accumulation_steps=1, checkpoint_every=1000)
    trainer = Trainer(tiny_model, cfg)
    reports = trainer.train(features[:1], max_steps=60)
    assert reports[-1].loss < reports[0].loss
    assert len(trainer.moving_average_loss(window=10)) == 51

@pytest.mark.slow
def test_toy_profile_memorizes_micro_corpus(toy_config_path, featurizer, toy_meetings, features):
    config = ConfigLoader.load(toy_config_path)
    model = HMNetModel.create(config.model, featurizer, seed=0)
    trainer = Trainer(model, config.pretrain)
    trainer.train(features, max_steps=2000)

    block_means = np.array([r.loss for r in trainer.history[:500]]).reshape(10, 50).mean(axis=1)
    assert np.all(np.diff(block_means) < 0)

    final_loss = np.mean([model.loss(f).item() for f in features])
    assert final_loss < 0.1

    summarizer = HMNetSummarizer(model, DecodeConfig(beam_size=1, min_len=0, max_len=16, trigram_blocking=False),
                                 greedy=True)
    exact = sum(summarizer.summarize(m) == m.summary for m in toy_meetings)
    assert exact >= 7
