"""Unit tests for the logger utilities."""

import logging
import os
import unittest
from logging.handlers import RotatingFileHandler
from unittest.mock import patch

from hyperbench.utils.logger import BaseLogger, ColoredFormatter, RotLogger, TimeLogger, get_logger


class TestBaseLogger(unittest.TestCase):
    """Unit tests for the BaseLogger class."""

    def setUp(self) -> None:
        """Reset singleton for each test."""
        BaseLogger._instance = None
        self.logger_name = "test_log"

    def test_singleton_behavior(self) -> None:
        """Two instantiations return the same object."""
        logger1 = BaseLogger(self.logger_name)
        logger2 = BaseLogger(self.logger_name)
        assert logger1 is logger2, "BaseLogger should implement singleton pattern"

    def test_log_file_creation(self) -> None:
        """The log file is created on initialization."""
        logger = BaseLogger(self.logger_name)
        log_path = logger.get_log_path()
        assert log_path.exists()
        assert log_path.is_file()
        assert self.logger_name in log_path.name

    def test_levels_forward_with_stacklevel(self) -> None:
        """Each level method forwards to the stdlib logger with stacklevel 2."""
        logger = BaseLogger(self.logger_name)
        for level in ("info", "debug", "warning", "error", "critical"):
            with patch.object(logger.logger, level) as mock_level:
                getattr(logger, level)(f"{level} message")
                mock_level.assert_called_once_with(f"{level} message", stacklevel=2)

    def test_has_errors_flag(self) -> None:
        """An error message sets the error flag."""
        logger = BaseLogger(self.logger_name)
        assert not logger.has_errors()
        with patch.object(logger.logger, "error"):
            logger.error("boom")
        assert logger.has_errors()

    def test_set_console_level(self) -> None:
        """The console threshold can be lowered to DEBUG."""
        logger = BaseLogger(self.logger_name)
        logger.set_console_level(logging.DEBUG)
        assert logger.console_handler.level == logging.DEBUG
        logger.set_console_level(logging.INFO)
        assert logger.console_handler.level == logging.INFO

    def tearDown(self) -> None:
        """Remove the created log file."""
        logger = BaseLogger(self.logger_name)
        if logger.get_log_path().exists():
            os.remove(logger.get_log_path())


class TestColoredFormatter(unittest.TestCase):
    """Unit tests for the ColoredFormatter class."""

    def test_wraps_in_level_color(self) -> None:
        """A WARNING record is wrapped in yellow and reset."""
        formatter = ColoredFormatter(fmt="%(message)s")
        record = logging.LogRecord("x", logging.WARNING, __file__, 1, "careful", None, None)
        text = formatter.format(record)
        assert text.startswith(ColoredFormatter.COLORS["WARNING"])
        assert text.endswith(ColoredFormatter.COLORS["RESET"])
        assert "careful" in text


class TestTimeLogger(unittest.TestCase):
    """Unit tests for the TimeLogger class."""

    def setUp(self) -> None:
        """Reset singleton for each test."""
        TimeLogger._instance = None
        self.logger_name = "time_test"

    def test_timestamped_log_file_creation(self) -> None:
        """A timestamped file is created in a folder named after the logger."""
        logger = TimeLogger(self.logger_name)
        log_path = logger.get_log_path()
        assert log_path.exists()
        assert log_path.parent.name == self.logger_name
        assert log_path.name.endswith(".log")

    def tearDown(self) -> None:
        """Remove the created file and folder."""
        log_path = TimeLogger(self.logger_name).get_log_path()
        if log_path.exists():
            os.remove(log_path)
        if log_path.parent.exists():
            os.rmdir(log_path.parent)


class TestRotLogger(unittest.TestCase):
    """Unit tests for the RotLogger class."""

    def setUp(self) -> None:
        """Reset singleton for each test."""
        RotLogger._instance = None
        self.logger_name = "rot_test"

    def test_rotating_file_handler_setup(self) -> None:
        """The first handler of the shared logger rotates."""
        logger = RotLogger(self.logger_name)
        assert logger.get_log_path().exists()
        assert isinstance(logger.logger.handlers[0], RotatingFileHandler)

    def tearDown(self) -> None:
        """Remove the created file and folder."""
        log_path = RotLogger(self.logger_name).get_log_path()
        if log_path.exists():
            os.remove(log_path)
        if log_path.parent.exists():
            os.rmdir(log_path.parent)


def test_get_logger_instance() -> None:
    """get_logger always returns the module-level RotLogger."""
    assert get_logger() is get_logger()
    assert isinstance(get_logger(), RotLogger)


if __name__ == "__main__":
    unittest.main()
