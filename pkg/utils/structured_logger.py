"""
Structured logging utilities for the toolkit
Provides run IDs, contextual JSON logging, and timing of solver stages
"""

import functools
import json
import logging
import sys
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, Optional

# Run ID shared by every record emitted during one command
_run_id: Optional[str] = None


def generate_run_id() -> str:
    """Generate a unique ID for one toolkit command"""
    return str(uuid.uuid4())


def set_run_id(run_id: str):
    """Set the run ID for this command"""
    global _run_id
    _run_id = run_id


def get_run_id() -> str:
    """Get the current run ID"""
    global _run_id
    if _run_id is None:
        _run_id = generate_run_id()
    return _run_id


def configure(level: str):
    """Set the level of every toolkit logger"""
    logging.getLogger("vi").setLevel(level.upper())


class StructuredLogger:
    """
    Structured logger that outputs JSON-formatted records to stderr
    Includes run IDs, timestamps, and contextual information
    """

    def __init__(self, name: str):
        self.name = name
        self.logger = logging.getLogger(f"vi.{name}")

        # stdout carries reports; logs never go there
        root = logging.getLogger("vi")
        if not root.handlers:
            handler = logging.StreamHandler(sys.stderr)
            handler.setFormatter(JSONFormatter())
            root.addHandler(handler)
            root.propagate = False
            from src import config
            root.setLevel(config.LOG_LEVEL.upper())

    def _log(self, level: int, message: str, **kwargs):
        """Internal log method with structured data"""
        if not self.logger.isEnabledFor(level):
            return
        log_data = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': logging.getLevelName(level),
            'logger': self.name,
            'run_id': get_run_id(),
            'message': message,
            **kwargs
        }
        self.logger.log(level, json.dumps(log_data, default=_jsonable))

    def info(self, message: str, **kwargs):
        self._log(logging.INFO, message, **kwargs)

    def warning(self, message: str, **kwargs):
        self._log(logging.WARNING, message, **kwargs)

    def error(self, message: str, **kwargs):
        self._log(logging.ERROR, message, **kwargs)

    def debug(self, message: str, **kwargs):
        self._log(logging.DEBUG, message, **kwargs)


def _jsonable(value: Any):
    # numpy scalars and arrays
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


class JSONFormatter(logging.Formatter):
    """Formatter that passes pre-serialised JSON through"""

    def format(self, record):
        message = record.getMessage()
        if message.startswith("{"):
            return message
        return json.dumps({'level': record.levelname, 'logger': record.name, 'message': message})


def log_execution_time(func):
    """
    Decorator to log function execution time

    Usage:
        @log_execution_time
        def solve_grid(...):
            ...
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = StructuredLogger(func.__module__)
        start_time = datetime.now(timezone.utc)

        logger.debug(
            f"Starting {func.__name__}",
            function=func.__name__,
            event='function_start'
        )

        try:
            result = func(*args, **kwargs)

            duration = (datetime.now(timezone.utc) - start_time).total_seconds()
            logger.info(
                f"Completed {func.__name__}",
                function=func.__name__,
                event='function_complete',
                duration_seconds=duration,
                success=True
            )

            return result

        except Exception as e:
            duration = (datetime.now(timezone.utc) - start_time).total_seconds()
            logger.error(
                f"Failed {func.__name__}: {str(e)}",
                function=func.__name__,
                event='function_error',
                duration_seconds=duration,
                success=False,
                error_type=type(e).__name__,
                error_message=str(e)
            )
            raise

    return wrapper


class RunContext:
    """
    Context manager for one CLI command
    Tracks run ID, stage, wall time and metrics
    """

    def __init__(self, command: str, stage: str):
        self.command = command
        self.stage = stage
        self.run_id = generate_run_id()
        self.logger = StructuredLogger(command)
        self.start_time: Optional[datetime] = None
        self.duration_seconds: Optional[float] = None
        self.metrics: Dict[str, Any] = {}

    def __enter__(self):
        self.start_time = datetime.now(timezone.utc)
        set_run_id(self.run_id)

        self.logger.info(
            f"Starting stage: {self.stage}",
            command=self.command,
            stage=self.stage,
            event='stage_start'
        )

        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration_seconds = (datetime.now(timezone.utc) - self.start_time).total_seconds()

        if exc_type is None:
            self.logger.info(
                f"Completed stage: {self.stage}",
                command=self.command,
                stage=self.stage,
                event='stage_complete',
                duration_seconds=self.duration_seconds,
                success=True,
                **self.metrics
            )
        else:
            self.logger.error(
                f"Failed stage: {self.stage}",
                command=self.command,
                stage=self.stage,
                event='stage_error',
                duration_seconds=self.duration_seconds,
                success=False,
                error_type=exc_type.__name__,
                error_message=str(exc_val),
                **self.metrics
            )

        return False  # Don't suppress exceptions

    def add_metric(self, key: str, value: Any):
        """Add a metric to report when the stage ends"""
        self.metrics[key] = value

    def log_progress(self, message: str, **kwargs):
        """Log progress within a stage"""
        self.logger.info(
            message,
            command=self.command,
            stage=self.stage,
            event='progress',
            **kwargs
        )
