"""Process logging for the mixing engine.

Console records go to stderr so that stdout stays clean for reports and CSV
rows. With a log directory every run also gets its own session folder:

    logs/<run_id>/session.json
    logs/<run_id>/<app_name>_pid<pid>.log
    logs/latest.txt
"""

import contextlib
import contextvars
from dataclasses import dataclass
from datetime import datetime
import json
import logging
from logging.handlers import RotatingFileHandler
import os
import shutil
import sys
import threading
from typing import Optional

LOG_RUN_ID_ENV = "GME_LOG_RUN_ID"
LOG_SESSION_DIR_ENV = "GME_LOG_SESSION_DIR"
LOG_FILE_ENV = "GME_LOG_FILE"

DEFAULT_MAX_BYTES = 20 * 1024 * 1024
DEFAULT_BACKUP_COUNT = 5
DEFAULT_MAX_SESSIONS = 30

CONTEXT_FIELDS = ("run_id", "command", "scenario", "point")
UNSET = "-"

RECORD_FORMAT = (
    "%(asctime)s.%(msecs)03d - %(levelname)s - "
    "run=%(run_id)s command=%(command)s scenario=%(scenario)s point=%(point)s "
    "pid=%(process)d thread=%(threadName)s - "
    "%(filename)s:%(lineno)d - %(message)s"
)
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# run_id and command hold for the whole process, sweep worker threads included;
# scenario and point are bound per task through the context variable.
_process_fields = dict.fromkeys(CONTEXT_FIELDS, UNSET)
_process_lock = threading.Lock()
_task_fields = contextvars.ContextVar("gme_task_fields", default=None)


def _field_text(value) -> str:
    return UNSET if value is None or value == "" else str(value)


def _bind_process_fields(**fields) -> None:
    with _process_lock:
        _process_fields.update(dict.fromkeys(CONTEXT_FIELDS, UNSET))
        _process_fields.update({key: _field_text(value) for key, value in fields.items()})


def get_logging_context() -> dict:
    with _process_lock:
        context = dict(_process_fields)
    context.update(_task_fields.get() or {})
    return context


@contextlib.contextmanager
def logging_context(**fields):
    """Bind scenario/point (or command) to records emitted inside the block."""
    unknown = set(fields) - set(CONTEXT_FIELDS[1:])
    if unknown:
        raise KeyError(f"unknown log context fields: {sorted(unknown)}")
    bound = dict(_task_fields.get() or {})
    for key, value in fields.items():
        if value is None:
            bound.pop(key, None)
        else:
            bound[key] = _field_text(value)
    token = _task_fields.set(bound)
    try:
        yield
    finally:
        _task_fields.reset(token)


class ContextFilter(logging.Filter):
    """Stamp the context fields onto every record that passes a handler."""

    def filter(self, record):
        context = get_logging_context()
        for name in CONTEXT_FIELDS:
            if not hasattr(record, name):
                setattr(record, name, context[name])
        return True


@dataclass
class LogSession:
    run_id: str
    root: str
    directory: str
    inherited: bool

    @classmethod
    def resolve(cls, log_dir: str) -> "LogSession":
        """Join the session named in the environment, or open a new one under log_dir."""
        run_id = os.environ.get(LOG_RUN_ID_ENV)
        directory = os.environ.get(LOG_SESSION_DIR_ENV)
        root = os.path.abspath(log_dir)
        if run_id and directory:
            return cls(run_id, root, os.path.abspath(directory), inherited=True)
        run_id = f"{datetime.now():%Y%m%d_%H%M%S}_pid{os.getpid()}"
        safe = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in run_id)
        return cls(run_id, root, os.path.join(root, safe), inherited=False)

    def open(self, app_name: str, command, max_sessions: int) -> None:
        os.makedirs(self.directory, exist_ok=True)
        self._write_metadata(app_name, command)
        if not self.inherited:
            self._point_latest()
            cleanup_old_log_sessions(self.root, self.directory, max_sessions)

    def log_file(self, app_name: str) -> str:
        stem = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in app_name)
        return os.path.join(self.directory, f"{stem}_pid{os.getpid()}.log")

    def _write_metadata(self, app_name: str, command) -> None:
        metadata = {
            "run_id": self.run_id,
            "created_at": datetime.now().astimezone().isoformat(),
            "source_pid": os.getpid(),
            "entry_app": app_name,
            "command": command,
        }
        try:
            with open(os.path.join(self.directory, "session.json"), "x", encoding="utf-8") as file_obj:
                json.dump(metadata, file_obj, ensure_ascii=False, indent=2)
                file_obj.write("\n")
        except FileExistsError:
            pass

    def _point_latest(self) -> None:
        pointer = os.path.join(self.root, "latest.txt")
        staging = f"{pointer}.{os.getpid()}.tmp"
        try:
            with open(staging, "w", encoding="utf-8") as file_obj:
                file_obj.write(self.directory + "\n")
            os.replace(staging, pointer)
        except OSError:
            with contextlib.suppress(OSError):
                os.remove(staging)


def cleanup_old_log_sessions(log_root: str, current_session: str, max_sessions: int) -> None:
    """Delete the oldest session folders so at most max_sessions remain."""
    if max_sessions <= 0 or not os.path.isdir(log_root):
        return
    current_session = os.path.abspath(current_session)
    candidates = []
    for entry in os.scandir(log_root):
        path = os.path.abspath(entry.path)
        if path == current_session or not entry.is_dir():
            continue
        if not os.path.isfile(os.path.join(path, "session.json")):
            continue
        with contextlib.suppress(OSError):
            candidates.append((entry.stat().st_mtime, path))
    candidates.sort()
    excess = len(candidates) + 1 - max_sessions
    for _, path in candidates[:max(0, excess)]:
        try:
            shutil.rmtree(path)
        except OSError as exc:
            print(f"删除旧日志批次失败: path={path}, error={exc}", file=sys.__stderr__)


def _install_exception_hooks(logger: logging.Logger) -> None:
    def on_main_thread(exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
            return
        logger.critical("未捕获异常", exc_info=(exc_type, exc_value, exc_traceback))

    def on_worker_thread(args):
        if args.exc_type is KeyboardInterrupt:
            return
        logger.critical(
            "线程未捕获异常: %s",
            args.thread.name if args.thread else UNSET,
            exc_info=(args.exc_type, args.exc_value, args.exc_traceback),
        )

    sys.excepthook = on_main_thread
    threading.excepthook = on_worker_thread


def setup_logging(
    app_name: str = "gibbs_mixing",
    log_dir: Optional[str] = "logs",
    *,
    command=None,
    console_level=logging.WARNING,
    max_bytes: int = DEFAULT_MAX_BYTES,
    backup_count: int = DEFAULT_BACKUP_COUNT,
    max_sessions: int = DEFAULT_MAX_SESSIONS,
) -> logging.Logger:
    """Reset the root logger; log_dir=None keeps output on the console only."""
    _task_fields.set(None)
    logger = logging.getLogger()
    logger.setLevel(logging.DEBUG)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        with contextlib.suppress(Exception):
            handler.close()

    handlers = [logging.StreamHandler(sys.__stderr__)]
    handlers[0].setLevel(console_level)

    session = None
    log_path = None
    if log_dir:
        session = LogSession.resolve(log_dir)
        session.open(app_name, command, max_sessions)
        log_path = session.log_file(app_name)
        file_handler = RotatingFileHandler(
            log_path,
            maxBytes=max(0, int(max_bytes)),
            backupCount=max(0, int(backup_count)),
            encoding="utf-8",
        )
        file_handler.setLevel(logging.DEBUG)
        handlers.append(file_handler)
        os.environ[LOG_FILE_ENV] = log_path

    run_id = session.run_id if session else UNSET
    _bind_process_fields(run_id=run_id, command=command)

    formatter = logging.Formatter(RECORD_FORMAT, datefmt=DATE_FORMAT)
    context_filter = ContextFilter()
    for handler in handlers:
        handler.setFormatter(formatter)
        handler.addFilter(context_filter)
        logger.addHandler(handler)

    logging.captureWarnings(True)
    _install_exception_hooks(logger)

    logger.log_path = log_path
    logger.log_session_dir = session.directory if session else None
    logger.run_id = run_id
    logger.info(
        "日志已初始化: app=%s, file=%s, rotate_max_bytes=%s, backups=%s",
        app_name,
        log_path,
        max_bytes,
        backup_count,
    )
    return logger
