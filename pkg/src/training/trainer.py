import gc
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import psutil

from src.config import TrainConfig
from src.data.features import MeetingFeatures
from src.exceptions import EmptyBatch
from src.interfaces.itraining_callback import ITrainingCallback
from src.model.hmnet import HMNetModel
from src.tensor import RunMode, zero_grads
from src.training.clipping import clip_gradients, global_norm
from src.training.radam import RAdamState, radam_step
from src.training.schedule import lr_at_step


@dataclass
class StepReport:
    """Outcome of one optimizer step; ``float(report)`` is the mean micro-batch loss."""
    loss: float
    grad_norm: float
    lr: float

    def __float__(self) -> float:
        return self.loss


def accumulated_step(
    model: HMNetModel,
    batch: Sequence[MeetingFeatures],
    state: RAdamState,
    cfg: TrainConfig,
    mode: Optional[RunMode] = None,
) -> StepReport:
    """
    One optimizer step over a batch of micro-batches (one meeting each).

    Each micro-batch loss is back-propagated scaled by 1/len(batch), so the
    accumulated gradient is the gradient of the mean loss. Gradients are
    clipped once, one RAdam update is applied at ``lr_at_step(state.step)``
    and all gradients are cleared afterwards.

    Raises:
        EmptyBatch: If ``batch`` is empty
    """
    if not batch:
        raise EmptyBatch("an optimizer step needs at least one meeting")
    trainable = model.params.trainable()
    tensors = [p for _, p in trainable]
    zero_grads(tensors)

    scale = 1.0 / len(batch)
    total = 0.0
    for features in batch:
        loss = model.loss(features, mode)
        (loss * scale).backward()
        total += loss.item()

    grads = {
        name: p.grad if p.grad is not None else np.zeros_like(p.values)
        for name, p in trainable
    }
    norm = global_norm(grads)
    clipped = clip_gradients(grads, cfg.clip_norm)
    lr = lr_at_step(state.step, cfg)
    radam_step(dict(trainable), clipped, state, lr)
    zero_grads(tensors)
    return StepReport(loss=total / len(batch), grad_norm=norm, lr=lr)


class ResourceMonitor:
    """
    Tracks process memory and step durations during training.

    Attributes:
        process: Process being monitored
        warning_threshold: Resident-memory threshold in bytes that triggers warnings
        step_times: Recent step durations in seconds
    """

    def __init__(self, warning_threshold_mb: int = 1000, history: int = 100):
        self.process = psutil.Process()
        self.warning_threshold = warning_threshold_mb * 1024 * 1024
        self.history = history
        self.start_time = time.time()
        self.step_times: List[float] = []

    def check_memory_usage(self) -> tuple:
        """Current RSS in bytes and whether it exceeds the threshold"""
        rss = self.process.memory_info().rss
        return rss, rss > self.warning_threshold

    def record_step_time(self, seconds: float) -> None:
        self.step_times.append(seconds)
        if len(self.step_times) > self.history:
            self.step_times.pop(0)

    def get_average_step_time(self) -> Optional[float]:
        return sum(self.step_times) / len(self.step_times) if self.step_times else None


class TrainingLog:
    """Appends one JSON record per optimizer step."""

    def __init__(self, path: Optional[str]):
        self.path = Path(path) if path else None
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("", encoding="utf-8")

    def write(self, step: int, report: StepReport) -> None:
        if self.path is None:
            return
        record = {"step": step, "lr": report.lr, "loss": report.loss, "grad_norm": report.grad_norm}
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record) + "\n")


class Trainer:
    """
    Runs the optimization loop over a featurized corpus.

    Each epoch visits the corpus in a seeded random order, cut into batches of
    ``accumulation_steps`` meetings (the last batch of an epoch may be
    smaller). Callbacks fire every ``checkpoint_every`` steps and once more
    after the final step.
    """

    def __init__(
        self,
        model: HMNetModel,
        config: TrainConfig,
        state: Optional[RAdamState] = None,
        callbacks: Sequence[ITrainingCallback] = (),
        log_path: Optional[str] = None,
        resource_monitor: Optional[ResourceMonitor] = None,
    ):
        self.model = model
        self.config = config
        self.state = state or RAdamState.from_config(config)
        self.callbacks = list(callbacks)
        self.training_log = TrainingLog(log_path)
        self.resource_monitor = resource_monitor or ResourceMonitor()
        self.rng = np.random.default_rng(config.seed)
        self.history: List[StepReport] = []
        self.logger = logging.getLogger(self.__class__.__name__)

    def batches(self, n_items: int):
        """Endless stream of index batches, reshuffled every epoch."""
        size = self.config.accumulation_steps
        while True:
            order = self.rng.permutation(n_items)
            for start in range(0, n_items, size):
                yield order[start:start + size]

    def train(self, corpus: Sequence[MeetingFeatures], max_steps: Optional[int] = None) -> List[StepReport]:
        """
        Train until ``max_steps`` optimizer steps have been taken in this call.

        Returns:
            One StepReport per step taken
        """
        if not corpus:
            raise EmptyBatch("cannot train on an empty corpus")
        steps = max_steps if max_steps is not None else self.config.max_steps
        mode = self.model.train_mode()
        reports: List[StepReport] = []
        batches = self.batches(len(corpus))
        self.logger.info(
            f"Training for {steps} steps on {len(corpus)} meetings "
            f"(accumulation {self.config.accumulation_steps}, peak lr {self.config.peak_lr})"
        )

        for _ in range(steps):
            self._check_memory()
            batch = [corpus[i] for i in next(batches)]
            start_time = time.time()
            report = accumulated_step(self.model, batch, self.state, self.config, mode)
            self._record_time(time.time() - start_time)

            reports.append(report)
            self.history.append(report)
            self.training_log.write(self.state.step, report)
            self.logger.debug(
                f"step {self.state.step} loss {report.loss:.4f} "
                f"grad_norm {report.grad_norm:.4f} lr {report.lr:.3e}"
            )
            if self.state.step % self.config.checkpoint_every == 0:
                self._fire_callbacks()

        if reports and self.state.step % self.config.checkpoint_every != 0:
            self._fire_callbacks()
        if reports:
            self.logger.info(f"Finished at step {self.state.step}, last loss {reports[-1].loss:.4f}")
        return reports

    def _fire_callbacks(self) -> None:
        for callback in self.callbacks:
            callback.on_checkpoint(self.state.step, self)

    def _check_memory(self) -> None:
        memory_usage, is_high = self.resource_monitor.check_memory_usage()
        if is_high:
            self.logger.warning(f"High memory usage detected: {memory_usage / (1024*1024):.2f} MB")
            gc.collect()

    def _record_time(self, seconds: float) -> None:
        avg_time = self.resource_monitor.get_average_step_time()
        self.resource_monitor.record_step_time(seconds)
        if avg_time and seconds > avg_time * 2:
            self.logger.warning(
                f"Step time ({seconds:.2f}s) significantly higher than average ({avg_time:.2f}s)"
            )

    def moving_average_loss(self, window: int = 50) -> List[float]:
        losses = np.array([r.loss for r in self.history])
        if len(losses) < window:
            return []
        kernel = np.ones(window) / window
        return list(np.convolve(losses, kernel, mode="valid"))
