"""Runtime configuration for torus-ech.

Provides the environment-driven settings and the logging setup:
  - Settings: dataclass of the resolved configuration
  - load_settings: read .env and the process environment into Settings
  - configure_logging: install the single stderr loguru sink
"""

import os
import sys
from dataclasses import dataclass

from dotenv import load_dotenv
from loguru import logger

from torus_ech.errors import RejectedInputError

OUTPUT_FORMATS = ("tsv", "json", "md")

DEFAULT_FORMAT = "tsv"
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_VERIFY_WORKERS = 4


@dataclass(frozen=True)
class Settings:
    """Resolved configuration.

    Attributes:
        output_format: default output format when --format is not given
        log_level: loguru level for the stderr sink
        verify_workers: concurrent per-q tasks in the verify command
    """

    output_format: str = DEFAULT_FORMAT
    log_level: str = DEFAULT_LOG_LEVEL
    verify_workers: int = DEFAULT_VERIFY_WORKERS


def load_settings() -> Settings:
    """Build Settings from .env and the process environment.

    Returns:
        Settings with ECH_FORMAT, ECH_LOG_LEVEL and ECH_VERIFY_WORKERS applied

    Raises:
        RejectedInputError: if ECH_FORMAT or ECH_VERIFY_WORKERS holds an invalid value
    """
    load_dotenv(override=True)

    env_format = os.getenv("ECH_FORMAT")
    output_format = DEFAULT_FORMAT
    if env_format:
        output_format = env_format.strip().lower()
        if output_format not in OUTPUT_FORMATS:
            raise RejectedInputError(
                f"ECH_FORMAT must be one of {', '.join(OUTPUT_FORMATS)}, got {env_format!r}"
            )

    raw_workers = os.getenv("ECH_VERIFY_WORKERS", str(DEFAULT_VERIFY_WORKERS))
    try:
        verify_workers = int(raw_workers)
    except ValueError:
        raise RejectedInputError(f"ECH_VERIFY_WORKERS must be an integer, got {raw_workers!r}")
    if verify_workers < 1:
        raise RejectedInputError(f"ECH_VERIFY_WORKERS must be positive, got {verify_workers}")

    return Settings(
        output_format=output_format,
        log_level=os.getenv("ECH_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper(),
        verify_workers=verify_workers,
    )


def configure_logging(level: str = DEFAULT_LOG_LEVEL):
    """Route loguru output to stderr at the given level; stdout stays reserved for results."""
    logger.remove()
    logger.add(sys.stderr, level=level)
