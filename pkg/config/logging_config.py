#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Logging Setup

Results go to stdout or files; log records always go to stderr.
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(level: Union[str, int] = "INFO", log_file: Optional[Union[str, Path]] = None) -> None:
    """Configure logging for the application.

    Args:
        level: Logging level name or number
        log_file: Optional file receiving a copy of the records
    """
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)

    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_path, encoding="utf-8"))

    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)

    # Reduce noise from some libraries
    logging.getLogger("PIL").setLevel(logging.WARNING)
