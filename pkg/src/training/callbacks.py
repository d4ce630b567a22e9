import logging
from pathlib import Path
from typing import Optional, Sequence

from src.config import DecodeConfig
from src.data.schema import Meeting
from src.evaluation.report import corpus_means, evaluate_system, scores_frame
from src.interfaces.itraining_callback import ITrainingCallback
from src.model.summarizer import HMNetSummarizer
from src.training.checkpoint import save_checkpoint


class CheckpointCallback(ITrainingCallback):
    """Saves the latest weights and optimizer state to ``<dir>/<name>-last.ckpt``."""

    def __init__(self, checkpoint_dir: str, name: str):
        self.path = Path(checkpoint_dir) / f"{name}-last.ckpt"

    def on_checkpoint(self, step: int, trainer) -> None:
        save_checkpoint(trainer.model, trainer.state, trainer.config, self.path)


class DevSelectionCallback(ITrainingCallback):
    """
    Keeps the checkpoint with the best mean ROUGE-1 F1 on a development set.

    Attributes:
        best_score: Best dev ROUGE-1 F1 seen so far (None before the first evaluation)
        best_step: Optimizer step that produced ``best_score``
    """

    def __init__(self, dev_meetings: Sequence[Meeting], decode_config: DecodeConfig, path: str):
        self.dev_meetings = list(dev_meetings)
        self.decode_config = decode_config
        self.path = Path(path)
        self.best_score: Optional[float] = None
        self.best_step: Optional[int] = None
        self.logger = logging.getLogger(self.__class__.__name__)

    def dev_rouge1(self, trainer) -> float:
        summarizer = HMNetSummarizer(trainer.model, self.decode_config)
        frame = scores_frame(evaluate_system(summarizer, self.dev_meetings))
        return corpus_means(frame)["rouge-1_f"]

    def on_checkpoint(self, step: int, trainer) -> None:
        score = self.dev_rouge1(trainer)
        self.logger.info(f"Dev ROUGE-1 F1 at step {step}: {score:.4f}")
        if self.best_score is None or score > self.best_score:
            self.best_score, self.best_step = score, step
            save_checkpoint(trainer.model, trainer.state, trainer.config, self.path)
            self.logger.info(f"New best dev ROUGE-1, saved {self.path}")
