"""
Logging for library calls and CLI runs.

Everything logs under the "uirisk" namespace. The file log is detailed and
stamps each record with the master seed of the run, so a log line can be
traced back to a reproducible invocation. The console log is terse and goes
to stderr; stdout is reserved for reports.
"""

import logging
import sys
from pathlib import Path

ROOT_LOGGER = "uirisk"
QUIET_LIBRARIES = ("filelock", "joblib", "numba")

FILE_FORMAT = "%(asctime)s | %(levelname)-8s | seed=%(seed)s | %(name)s:%(funcName)s:%(lineno)d | %(message)s"
CONSOLE_FORMAT = "%(asctime)s | %(levelname)-8s | %(message)s"


class SeedFilter(logging.Filter):
    """Attach the run seed to every record passing through a handler."""

    def __init__(self, seed: int | None):
        super().__init__()
        self.seed = "-" if seed is None else str(seed)

    def filter(self, record: logging.LogRecord) -> bool:
        record.seed = self.seed
        return True


def _file_handler(log_file: str, seed: int | None) -> logging.Handler:
    path = Path(log_file)
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path, encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    handler.addFilter(SeedFilter(seed))
    return handler


def _console_handler(level: str) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(getattr(logging, level.upper(), logging.INFO))
    handler.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt="%H:%M:%S"))
    return handler


def setup_logging(level: str = "INFO", log_file: str = "logs/uirisk.log", seed: int | None = None) -> None:
    """
    Install the file and console handlers, replacing any from an earlier call.

    Args:
        level: Console level (DEBUG, INFO, WARNING, ERROR, CRITICAL); the file always gets DEBUG
        log_file: Path to the log file, parent directories are created
        seed: Master seed recorded on every file line
    """
    root = logging.getLogger(ROOT_LOGGER)
    root.setLevel(logging.DEBUG)
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    root.addHandler(_file_handler(log_file, seed))
    root.addHandler(_console_handler(level))

    for name in QUIET_LIBRARIES:
        logging.getLogger(name).setLevel(logging.WARNING)

    root.debug("Logging configured, level=%s, file=%s", level, log_file)


def get_logger(name: str) -> logging.Logger:
    """
    Logger under the uirisk namespace; module names already inside it are kept.

        logger = get_logger(__name__)
        logger.info("UI check on %s: %s", family.label, verdict)
    """
    if name == ROOT_LOGGER or name.startswith(f"{ROOT_LOGGER}."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
