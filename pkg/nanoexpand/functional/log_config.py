#!/usr/bin/env python3

"""
Logging setup shared by the CLI and the test runner.
"""

import logging
import os
from typing import Optional

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s'
LEVEL_ENV_VAR = "NANOEXPAND_LOG_LEVEL"


def resolve_level(level: Optional[str] = None) -> str:
    """Explicit level, else the environment variable, else INFO."""
    chosen = (level or os.environ.get(LEVEL_ENV_VAR) or "INFO").upper()
    if chosen not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        raise ValueError(f"Invalid logging level '{chosen}'")
    return chosen


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Configure the root logger with the project-wide format."""
    chosen = resolve_level(level)
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    logging.basicConfig(
        level=getattr(logging, chosen),
        format=LOG_FORMAT,
        datefmt='%Y-%m-%d %H:%M:%S',
        handlers=handlers,
        force=True,
    )
    logger.debug(f"Logging configured at {chosen} level")
