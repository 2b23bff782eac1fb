import json
import logging
import os
import time

import log
from log import cleanup_old_log_sessions, get_logging_context, logging_context, setup_logging


class _Collect(logging.Handler):
    def __init__(self):
        super().__init__()
        self.records = []

    def emit(self, record):
        self.records.append(record)


def test_session_layout(tmp_path):
    logger = setup_logging("gibbs_mixing_test", str(tmp_path), command="point")
    session = tmp_path / logger.run_id
    metadata = json.loads((session / "session.json").read_text(encoding="utf-8"))
    assert metadata["command"] == "point"
    assert metadata["entry_app"] == "gibbs_mixing_test"
    assert (tmp_path / "latest.txt").read_text(encoding="utf-8").strip() == str(session)
    assert os.path.dirname(logger.log_path) == str(session)


def test_console_only(tmp_path):
    logger = setup_logging(log_dir=None, command="verify")
    assert logger.log_path is None
    assert logger.run_id == "-"
    assert not list(tmp_path.iterdir())


def test_context_fields_reach_records():
    logger = setup_logging(log_dir=None, command="sweep")
    collector = _Collect()
    collector.addFilter(logger.handlers[0].filters[0])
    logger.addHandler(collector)
    with logging_context(scenario="N=2/with/bose", point="length=10"):
        logging.getLogger("gibbs_mixing.test").info("计算完成")
        assert get_logging_context()["point"] == "length=10"
    logging.getLogger("gibbs_mixing.test").info("结束")
    first, second = collector.records
    assert (first.command, first.scenario, first.point) == ("sweep", "N=2/with/bose", "length=10")
    assert (second.scenario, second.point) == ("-", "-")


def test_cleanup_keeps_newest_sessions(tmp_path):
    sessions = []
    for index in range(4):
        session = tmp_path / f"run{index}"
        session.mkdir()
        (session / "session.json").write_text("{}", encoding="utf-8")
        stamp = time.time() - 100 + index
        os.utime(session, (stamp, stamp))
        sessions.append(session)
    (tmp_path / "notes").mkdir()

    cleanup_old_log_sessions(str(tmp_path), str(sessions[-1]), max_sessions=2)
    remaining = sorted(path.name for path in tmp_path.iterdir())
    assert remaining == ["notes", "run2", "run3"]


def test_inherited_session(tmp_path, monkeypatch):
    session = tmp_path / "shared"
    monkeypatch.setenv(log.LOG_RUN_ID_ENV, "shared_run")
    monkeypatch.setenv(log.LOG_SESSION_DIR_ENV, str(session))
    logger = setup_logging("worker", str(tmp_path / "unused"), command="sweep")
    assert logger.run_id == "shared_run"
    assert (session / "session.json").is_file()
    assert not (tmp_path / "unused" / "latest.txt").exists()
