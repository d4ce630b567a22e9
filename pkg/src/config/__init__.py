from .config_loader import (
    RunConfig,
    ConfigLoader,
    ModelConfig,
    TrainConfig,
    DecodeConfig,
    DataConfig,
    EvalConfig,
    PathsConfig,
    LoggingConfig
)

__all__ = [
    'RunConfig',
    'ConfigLoader',
    'ModelConfig',
    'TrainConfig',
    'DecodeConfig',
    'DataConfig',
    'EvalConfig',
    'PathsConfig',
    'LoggingConfig'
]
