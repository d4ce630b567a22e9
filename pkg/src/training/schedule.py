from src.config import TrainConfig


def lr_at_step(t: int, cfg: TrainConfig) -> float:
    """Linear warmup from ``initial_lr`` at step 0 to ``peak_lr`` at ``warmup_steps``, then constant."""
    if t < 0:
        raise ValueError(f"step must be non-negative, got {t}")
    if t >= cfg.warmup_steps:
        return cfg.peak_lr
    return cfg.initial_lr + (cfg.peak_lr - cfg.initial_lr) * (t / cfg.warmup_steps)
