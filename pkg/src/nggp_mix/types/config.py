"""Consolidated configuration imports for nggp-mix."""

from .runtime_config import RuntimeSettings
from .logging_config import LoggingSettings
from .main_config import NggpMixConfig, load_config

__all__ = [
    "RuntimeSettings",
    "LoggingSettings",
    "NggpMixConfig",
    "load_config",
]
