from __future__ import annotations
import logging, os
from logging.handlers import RotatingFileHandler
from pathlib import Path

_DEFAULT_LOG_NAME = "fsplit"
_CONSOLE_LEVEL = logging.WARNING

def _logs_dir() -> Path | None:
    """
    Log folder for app.log.
    FSPLIT_LOG_DIR wins; otherwise LOCALAPPDATA/fsplit/log on Windows or ~/.fsplit/log.
    Returns None when the folder cannot be created (console logging only).
    """
    try:
        from config import ENV_LOG_DIR
    except Exception:
        ENV_LOG_DIR = "FSPLIT_LOG_DIR"
    override = os.environ.get(ENV_LOG_DIR)
    if override:
        logs = Path(override)
    else:
        base = os.environ.get("LOCALAPPDATA")
        if base:
            logs = Path(base) / "fsplit" / "log"
        else:
            logs = Path.home() / ".fsplit" / "log"
    try:
        logs.mkdir(parents=True, exist_ok=True)
    except OSError:
        return None
    return logs

def get_logger(name: str = _DEFAULT_LOG_NAME, *, level: int = logging.INFO) -> logging.Logger:
    """
    Returns a module-specific logger with:
    - Rotating file logs: app.log (1MB x 5 backups) at `level`
    - stderr console handler at the shared console level (WARNING unless raised by the cli)
    """
    logger = logging.getLogger(name)
    if getattr(logger, "_app_configured", False):
        return logger

    logger.setLevel(min(level, _CONSOLE_LEVEL))
    logger.propagate = False
    fmt = logging.Formatter(
        fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    logs = _logs_dir()
    if logs is not None:
        try:
            fh = RotatingFileHandler(logs / "app.log", maxBytes=1_000_000, backupCount=5, encoding="utf-8")
        except OSError:
            fh = None
        if fh is not None:
            fh.setLevel(level)
            fh.setFormatter(fmt)
            logger.addHandler(fh)

    # Console once
    if not any(type(h) is logging.StreamHandler for h in logger.handlers):
        ch = logging.StreamHandler()  # stderr
        ch.setLevel(_CONSOLE_LEVEL)
        ch.setFormatter(fmt)
        ch._fsplit_console = True  # type: ignore[attr-defined]
        logger.addHandler(ch)

    logger._app_configured = True  # type: ignore[attr-defined]
    return logger

def set_console_level(level: int) -> None:
    """Retune the stderr handler of every logger created through get_logger."""
    global _CONSOLE_LEVEL
    _CONSOLE_LEVEL = level
    for logger in list(logging.Logger.manager.loggerDict.values()):
        if not isinstance(logger, logging.Logger) or not getattr(logger, "_app_configured", False):
            continue
        logger.setLevel(min(logger.level, level))
        for h in logger.handlers:
            if getattr(h, "_fsplit_console", False):
                h.setLevel(level)
