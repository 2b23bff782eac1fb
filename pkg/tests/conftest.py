import logging
import sys
import threading

import pytest

import log


@pytest.fixture(autouse=True)
def restore_logging(monkeypatch):
    """setup_logging replaces root handlers and excepthooks; undo that per test."""
    monkeypatch.setattr(sys, "excepthook", sys.excepthook)
    monkeypatch.setattr(threading, "excepthook", threading.excepthook)
    monkeypatch.delenv(log.LOG_RUN_ID_ENV, raising=False)
    monkeypatch.delenv(log.LOG_SESSION_DIR_ENV, raising=False)
    monkeypatch.delenv(log.LOG_FILE_ENV, raising=False)
    root = logging.getLogger()
    saved_handlers = list(root.handlers)
    saved_level = root.level
    yield
    for handler in list(root.handlers):
        if handler not in saved_handlers:
            root.removeHandler(handler)
            handler.close()
    for handler in saved_handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(saved_level)
    logging.captureWarnings(False)


@pytest.fixture
def half_config():
    """q = 0.5 at unit trap width."""
    from gibbs_mixing.core_model import PhysicalConfig

    return PhysicalConfig.from_q(0.5, 1.0)
