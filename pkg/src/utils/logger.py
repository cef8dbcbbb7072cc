"""
Structured Logging Setup
structlog over the standard logging module. Events go to stderr (stdout carries
the CLI status lines); numpy RuntimeWarnings are captured into the same stream.
"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import List, Optional

import structlog


def _processors() -> List:
    return [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]


def _renderer(format_type: str, stream):
    if format_type.lower() == "json":
        return structlog.processors.JSONRenderer(sort_keys=True)
    return structlog.dev.ConsoleRenderer(colors=stream.isatty())


def setup_logging(
    level: str = "INFO",
    format_type: str = "json",
    log_file: Optional[str] = None
) -> None:
    """
    Configures structured logging

    Args:
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        format_type: Output format (json, text); log files are always JSON
        log_file: Optional log file path
    """
    shared = _processors()
    structlog.configure(
        processors=shared + [structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(
        structlog.stdlib.ProcessorFormatter(processor=_renderer(format_type, sys.stderr), foreign_pre_chain=shared)
    )
    handlers: List[logging.Handler] = [console]

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setFormatter(
            structlog.stdlib.ProcessorFormatter(processor=_renderer("json", file_handler.stream), foreign_pre_chain=shared)
        )
        handlers.append(file_handler)

    logging.basicConfig(
        format="%(message)s",
        level=getattr(logging, level.upper(), logging.INFO),
        handlers=handlers,
        force=True
    )
    # numpy reports overflow / invalid divisions through the warnings module
    logging.captureWarnings(True)

    structlog.get_logger("traffic_toolkit").debug(
        "Logging configured", level=level, format=format_type, log_file=log_file
    )


def get_logger(name: str) -> structlog.BoundLogger:
    """
    Named logger

    Args:
        name: Logger name

    Returns:
        Configured structlog logger
    """
    return structlog.get_logger(name)


def create_run_log_file(command: str, logs_dir: Path = Path("logs")) -> str:
    """
    Timestamped log file path for one CLI command

    Args:
        command: simulate / analyze / ida
        logs_dir: Log directory

    Returns:
        Log file path such as logs/analyze_20240601_101500.log
    """
    logs_dir.mkdir(parents=True, exist_ok=True)
    safe_name = "".join(c if c.isalnum() or c in ('-', '_') else '_' for c in command.strip())
    return str(logs_dir / f"{safe_name}_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log")


class RunLogger:
    """
    Logger of one CLI command
    - binds the command and its context to every event logged while it runs
    - reports per-step outcomes and skipped sessions
    """

    def __init__(self, command: str, context: Optional[dict] = None):
        self.command = command
        self.context = context or {}
        self.logger = get_logger("run")

    def start_run(self):
        structlog.contextvars.bind_contextvars(command=self.command, **self.context)
        self.logger.info("Run starting")

    def end_run(self, status: str, duration: float):
        self.logger.info("Run completed", status=status, duration_seconds=duration)
        structlog.contextvars.clear_contextvars()

    def step_success(self, step_index: int, duration: float, outputs: Optional[list] = None):
        self.logger.info("Step completed",
                         step_index=step_index,
                         duration_seconds=duration,
                         outputs=outputs or [])

    def step_failure(self, step_index: int, error: str, error_type: str):
        self.logger.error("Step failed",
                          step_index=step_index,
                          error=error,
                          error_type=error_type)

    def session_skipped(self, session: str, reason: str):
        self.logger.warning("Session skipped", session=session, reason=reason)
