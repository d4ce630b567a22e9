import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

from src.config import LoggingConfig
from src.config.config_loader import is_log_level

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LEVEL_ENV_VAR = "HMNET_LOG"


def setup_logging(config: LoggingConfig) -> logging.Logger:
    """
    Configure the root logger with a rotating file handler and a stdout handler.

    The ``HMNET_LOG`` environment variable, when set, overrides the configured level.
    """
    level = os.environ.get(LEVEL_ENV_VAR, config.level)
    if not is_log_level(level):
        level = config.level
    level = level.upper()

    log_dir = Path(config.file_path).parent
    log_dir.mkdir(parents=True, exist_ok=True)

    # Clear existing handlers
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    file_handler = RotatingFileHandler(
        config.file_path,
        maxBytes=config.max_bytes,
        backupCount=config.backup_count
    )
    console_handler = logging.StreamHandler(sys.stdout)

    formatter = logging.Formatter(LOG_FORMAT)
    file_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    logging.basicConfig(
        level=level,
        handlers=[file_handler, console_handler]
    )
    return logging.getLogger("HMNetRunner")
