"""Singleton logger with a colored stderr console and a rotating file.

Stdout is reserved for machine output of the CLI (reports, emitted structures,
census streams), so the console handler is bound to stderr.
"""

import logging
import os
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import ClassVar

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] [%(filename)s:%(lineno)d] %(message)s"
DATE_FORMAT = "%H:%M:%S"
ROTATE_BYTES = 5 * 1024 * 1024
ROTATE_BACKUPS = 5


class ColoredFormatter(logging.Formatter):
    """Formatter wrapping each record in the ANSI color of its level."""

    COLORS: ClassVar[dict[str, str]] = {
        "DEBUG": "\033[0;36m",  # Cyan
        "INFO": "\033[0;32m",  # Green
        "WARNING": "\033[0;33m",  # Yellow
        "ERROR": "\033[0;31m",  # Red
        "CRITICAL": "\033[0;37m\033[41m",  # White on Red BG
        "RESET": "\033[0m",
    }

    def format(self, record: logging.LogRecord) -> str:
        """Format the record and wrap it in color escape sequences.

        Args:
          record: The record to format.

        Returns:
          The formatted line with ANSI color codes applied.
        """
        color = self.COLORS.get(record.levelname, self.COLORS["RESET"])
        return color + super().format(record) + self.COLORS["RESET"]


class BaseLogger:
    """Application logger with one file handler and one stderr handler.

    Instantiating the class twice returns the same configured object, so
    every module can call ``get_logger()`` at import time.
    """

    _instance = None  # Singleton

    def __new__(cls, input_name: Path | str | None = None) -> "BaseLogger":
        """Init or return the singleton logger instance."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._init_logger(input_name)
        return cls._instance

    def _init_logger(self, input_name: Path | str | None = None) -> None:
        """Create the underlying logger and attach both handlers.

        Args:
          input_name: Name of the log file or folder (defaults to 'hyperbench').
        """
        self._has_error = False
        self.base_folder = Path("logs")

        self.logger = logging.getLogger("HyperbenchLogger")
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

        self.log_path, file_handler = self._setup_handler(input_name)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))

        self.console_handler = logging.StreamHandler(sys.stderr)
        self.console_handler.setLevel(logging.INFO)
        self.console_handler.setFormatter(
            ColoredFormatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT),
        )

        if not self.logger.handlers:
            self.logger.addHandler(file_handler)
            self.logger.addHandler(self.console_handler)

    def _setup_handler(
        self,
        input_name: Path | str | None = None,
    ) -> tuple[Path, logging.FileHandler]:
        """Create a plain file handler under ``logs/``.

        Args:
          input_name: Optional identifier used to name the log file.

        Returns:
          The log path and its handler.
        """
        os.makedirs(self.base_folder, exist_ok=True)
        log_path = self.base_folder / f"{(input_name or 'hyperbench')}.log"
        return log_path, logging.FileHandler(log_path, encoding="utf-8")

    def set_console_level(self, level: int) -> None:
        """Change the threshold of the stderr handler.

        Args:
          level: A ``logging`` level such as ``logging.DEBUG``.
        """
        self.console_handler.setLevel(level)

    def info(self, msg: str) -> None:
        """Log at INFO level.

        Args:
          msg: Message to log.
        """
        self.logger.info(msg, stacklevel=2)

    def debug(self, msg: str) -> None:
        """Log at DEBUG level.

        Args:
          msg: Message to log.
        """
        self.logger.debug(msg, stacklevel=2)

    def warning(self, msg: str) -> None:
        """Log at WARNING level.

        Args:
          msg: Message to log.
        """
        self.logger.warning(msg, stacklevel=2)

    def error(self, msg: str) -> None:
        """Log at ERROR level and remember that an error happened.

        Args:
          msg: Message to log.
        """
        self._has_error = True
        self.logger.error(msg, stacklevel=2)

    def critical(self, msg: str) -> None:
        """Log at CRITICAL level.

        Args:
          msg: Message to log.
        """
        self.logger.critical(msg, stacklevel=2)

    def get_log_path(self) -> Path:
        """Return the active log file path."""
        return self.log_path

    def has_errors(self) -> bool:
        """Return whether an error has been logged since startup."""
        return self._has_error


class TimeLogger(BaseLogger):
    """Logger writing one timestamped file per run in ``logs/<name>/``."""

    def _setup_handler(
        self,
        input_name: Path | str | None = None,
    ) -> tuple[Path, logging.FileHandler]:
        """Create a timestamped file handler for a single run.

        Args:
          input_name: Optional identifier used to name the folder.

        Returns:
          The log path and its handler.
        """
        timestamp = datetime.now().strftime("%d-%m-%Y_%H-%M-%S")
        log_dir = self.base_folder / (input_name or "hyperbench")
        os.makedirs(log_dir, exist_ok=True)
        log_path = log_dir / f"{timestamp}.log"
        return log_path, logging.FileHandler(log_path, encoding="utf-8")


class RotLogger(BaseLogger):
    """Logger whose file rotates once it exceeds a fixed size."""

    def _setup_handler(
        self,
        input_name: Path | str | None = None,
    ) -> tuple[Path, logging.FileHandler]:
        """Create a rotating file handler in ``logs/<name>/<name>.log``.

        Args:
          input_name: Optional identifier for the log folder.

        Returns:
          The log path and its rotating handler.
        """
        name = input_name or "hyperbench"
        log_dir = self.base_folder / name
        os.makedirs(log_dir, exist_ok=True)
        log_path = log_dir / f"{name}.log"
        file_handler = RotatingFileHandler(
            log_path,
            maxBytes=ROTATE_BYTES,
            backupCount=ROTATE_BACKUPS,
            encoding="utf-8",
        )
        return log_path, file_handler


logger = RotLogger("hyperbench")


def get_logger() -> RotLogger:
    """Return the shared logger used by every hyperbench module."""
    return logger
