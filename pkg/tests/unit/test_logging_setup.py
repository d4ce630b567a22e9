import logging
from logging.handlers import RotatingFileHandler

import pytest

from src.config import LoggingConfig
from src.logging_setup import setup_logging

@pytest.fixture
def log_config(tmp_path):
    root = logging.getLogger()
    previous = root.level
    yield LoggingConfig(level="INFO", file_path=str(tmp_path / "logs" / "hmnet.log"))
    root.setLevel(previous)
    for handler in list(root.handlers):
        if isinstance(handler, RotatingFileHandler) or type(handler) is logging.StreamHandler:
            root.removeHandler(handler)
            handler.close()

def test_rotating_file_and_console_handlers(log_config):
    setup_logging(log_config)
    handlers = logging.getLogger().handlers
    assert any(isinstance(h, RotatingFileHandler) for h in handlers)
    assert any(type(h) is logging.StreamHandler for h in handlers)
    rotating = next(h for h in handlers if isinstance(h, RotatingFileHandler))
    assert (rotating.maxBytes, rotating.backupCount) == (10 * 1024 * 1024, 5)

@pytest.mark.parametrize("env_level, expected", [
    ("debug", logging.DEBUG),
    ("WARNING", logging.WARNING),
    ("chatty", logging.INFO),
])
def test_env_level_override(monkeypatch, log_config, env_level, expected):
    monkeypatch.setenv("HMNET_LOG", env_level)
    setup_logging(log_config)
    assert logging.getLogger().level == expected
