"""Centralized logging configuration for the toolkit.

All entry points (the CLI and the batch scripts) configure logging through
``setup_logging`` so records share one format. Logs go to stderr by default:
stdout is reserved for reports, which must stay byte-identical across runs.
"""

import logging
import sys
from typing import Any, Mapping, Optional, TextIO

from pythonjsonlogger import json as jsonlogger

from packages.shared.settings import get_log_format, get_log_level

JSON_FIELDS = "%(asctime)s %(name)s %(levelname)s %(message)s"
RENAMED = {"levelname": "severity", "asctime": "timestamp"}


class RunContextFilter(logging.Filter):
    """Stamps every record with the entry point name and any run context (command, seed)."""

    def __init__(self, service_name: str, context: Optional[Mapping[str, Any]] = None):
        super().__init__()
        self.service_name = service_name
        self.context = dict(context or {})

    def filter(self, record: logging.LogRecord) -> bool:
        record.service_name = self.service_name
        for key, value in self.context.items():
            setattr(record, key, value)
        return True


def setup_logging(
    service_name: str,
    log_level: Optional[str] = None,
    log_format: Optional[str] = None,
    stream: Optional[TextIO] = None,
    context: Optional[Mapping[str, Any]] = None,
) -> logging.Logger:
    """Configure the root logger for an entry point.

    Args:
        service_name: Name of the entry point (e.g., 'cli', 'run-samples')
        log_level: DEBUG, INFO, WARNING, ERROR or CRITICAL. Defaults to LOG_LEVEL.
        log_format: 'json' or 'text'. Defaults to LOG_FORMAT.
        stream: Destination stream. Defaults to stderr.
        context: Extra fields attached to every JSON record.

    Returns:
        The configured root logger.

    Example:
        >>> from packages.shared.logger import setup_logging
        >>> logger = setup_logging("cli", log_format="text")
        >>> logger.info("Computation started")
    """
    level_name = (log_level or get_log_level()).upper()
    format_type = (log_format or get_log_format()).lower()
    level = getattr(logging, level_name, logging.INFO)

    root = logging.getLogger()
    # a second call (tests, batch runs) replaces the handler instead of stacking
    root.handlers.clear()
    root.setLevel(level)

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setLevel(level)
    if format_type == "json":
        handler.setFormatter(jsonlogger.JsonFormatter(fmt=JSON_FIELDS, rename_fields=RENAMED))
        handler.addFilter(RunContextFilter(service_name, context))
    else:
        handler.setFormatter(
            logging.Formatter(
                fmt=f"%(levelname)s: [%(asctime)s] [{service_name}] %(name)s: %(message)s",
                datefmt="%H:%M:%S",
            )
        )
    root.addHandler(handler)

    root.debug("Logging configured for %s (level=%s, format=%s)", service_name, level_name, format_type)
    return root
