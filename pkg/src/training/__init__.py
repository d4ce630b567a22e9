from .schedule import lr_at_step
from .radam import RAdamState, radam_step
from .clipping import clip_gradients, global_norm
from .trainer import StepReport, accumulated_step, ResourceMonitor, TrainingLog, Trainer
from .checkpoint import Checkpoint, save_checkpoint, load_checkpoint, FORMAT_VERSION
from .callbacks import CheckpointCallback, DevSelectionCallback

__all__ = [
    'lr_at_step',
    'RAdamState',
    'radam_step',
    'clip_gradients',
    'global_norm',
    'StepReport',
    'accumulated_step',
    'ResourceMonitor',
    'TrainingLog',
    'Trainer',
    'Checkpoint',
    'save_checkpoint',
    'load_checkpoint',
    'FORMAT_VERSION',
    'CheckpointCallback',
    'DevSelectionCallback'
]
