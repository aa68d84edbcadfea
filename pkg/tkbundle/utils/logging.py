"""
Logging setup for the verification CLI.

Console records go to stderr so reports on stdout stay machine-readable; a
rotating file is added only when a log directory is given.
"""

import datetime
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import List, Optional

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(name)s - %(message)s'
LOG_FILE_BYTES = 5 * 1024 * 1024
LOG_FILE_BACKUPS = 3

def _rotating_file(log_dir: str, log_file: Optional[str]) -> RotatingFileHandler:
    os.makedirs(log_dir, exist_ok=True)
    log_file = log_file or f"tkbundle_{datetime.datetime.now():%Y%m%d_%H%M%S}.log"
    return RotatingFileHandler(os.path.join(log_dir, log_file),
                               maxBytes=LOG_FILE_BYTES, backupCount=LOG_FILE_BACKUPS)

def setup_logging(
    log_level: str = 'WARNING',
    log_file: Optional[str] = None,
    log_dir: Optional[str] = None
) -> logging.Logger:
    """
    Replace the root handlers with a stderr handler and, if log_dir is set,
    a rotating file handler.

    Args:
        log_level: Level name; unknown names fall back to WARNING
        log_file: File name inside log_dir (timestamped when None)
        log_dir: Directory for the log file, or None for console only

    Returns:
        Root logger
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_dir is not None:
        handlers.append(_rotating_file(log_dir, log_file))

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)
    root = logging.getLogger()
    root.debug(f"Logging to {', '.join(type(h).__name__ for h in handlers)} at {log_level}")
    return root

def log_exception(logger: logging.Logger, exc: Exception, message: str = "An exception occurred") -> None:
    """Log exc under message, with traceback."""
    logger.error(f"{message}: {type(exc).__name__}: {exc}", exc_info=True)
