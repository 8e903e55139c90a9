"""
Central logging configuration for the blanket system.

Supports:
- Separate log files per subsystem (kernels, selection, synthetic, bench, cli)
- Console (stderr) + file logging
- Log rotation
"""

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

from blanket_system.config.config import CONFIG


LOG_DIR = Path(CONFIG["paths"]["logs_dir"])
LOG_LEVEL = CONFIG["logging"].get("level", "INFO")


def get_logger(name: str, logfile: str = "system.log") -> logging.Logger:
    """
    Create and return a configured logger.

    Parameters
    ----------
    name : str
        Module name requesting logger.

    logfile : str
        Log file name inside the configured log directory
        (selection.log, bench.log, ...).

    Returns
    -------
    logging.Logger
    """

    logger = logging.getLogger(name)

    # Prevent duplicate handlers when modules reload
    if logger.handlers:
        return logger

    logger.setLevel(LOG_LEVEL)

    formatter = logging.Formatter(
        "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
    )

    LOG_DIR.mkdir(parents=True, exist_ok=True)

    file_handler = RotatingFileHandler(
        LOG_DIR / logfile,
        maxBytes=5 * 1024 * 1024,  # 5 MB
        backupCount=3
    )
    file_handler.setFormatter(formatter)

    # stdout is reserved for command results
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(formatter)

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)

    logger.propagate = False

    return logger
