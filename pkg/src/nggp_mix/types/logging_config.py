"""Logging configuration for nggp-mix."""

import logging
import os
from dataclasses import dataclass

DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


@dataclass
class LoggingSettings:
    """Level and format of the root logger."""

    level: str = "INFO"
    format: str = DEFAULT_LOG_FORMAT

    @classmethod
    def from_env(cls) -> "LoggingSettings":
        """Read LOG_LEVEL and LOG_FORMAT."""
        return cls(
            level=os.getenv("LOG_LEVEL", "INFO"),
            format=os.getenv("LOG_FORMAT", DEFAULT_LOG_FORMAT),
        )

    @property
    def log_level(self) -> int:
        """Numeric level; unknown names fall back to INFO."""
        return getattr(logging, self.level.upper(), logging.INFO)

    def is_valid(self) -> bool:
        return isinstance(logging.getLevelName(self.level.upper()), int)
