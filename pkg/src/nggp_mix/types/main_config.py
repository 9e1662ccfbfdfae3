"""Main configuration management for nggp-mix."""

import logging
from dataclasses import dataclass

from .logging_config import LoggingSettings
from .runtime_config import RuntimeSettings

logger = logging.getLogger(__name__)


@dataclass
class NggpMixConfig:
    """Runtime limits plus logging, both read from the environment."""

    runtime: RuntimeSettings
    logging: LoggingSettings

    @classmethod
    def from_env(cls) -> "NggpMixConfig":
        return cls(runtime=RuntimeSettings.from_env(), logging=LoggingSettings.from_env())

    def setup_logging(self) -> None:
        """Configure the root logger; replaces handlers installed earlier."""
        logging.basicConfig(
            level=self.logging.log_level,
            format=self.logging.format,
            force=True,
        )
        logger.info(f"Logging configured at {self.logging.level} level")
        logger.debug(
            f"Runtime settings: output_dir={self.runtime.output_dir}, "
            f"max_atoms={self.runtime.max_atoms}, atom_floor={self.runtime.atom_floor}, "
            f"prior_max_atoms={self.runtime.prior_max_atoms}, "
            f"neglected_mass={self.runtime.neglected_mass}, "
            f"verify_level={self.runtime.verify_level}"
        )


def load_config() -> NggpMixConfig:
    """Load nggp-mix configuration from environment variables.

    Returns:
        NggpMixConfig: Loaded configuration

    Raises:
        ValueError: If a numeric setting cannot be parsed or is out of range
    """
    config = NggpMixConfig.from_env()

    if not config.runtime.is_valid():
        raise ValueError(
            "Invalid runtime settings: NGGP_MIX_MAX_ATOMS must be >= 1, "
            "NGGP_MIX_ATOM_FLOOR must be > 0, NGGP_MIX_PRIOR_MAX_ATOMS must be >= 1, "
            "NGGP_MIX_NEGLECTED_MASS must lie in (0, 1) and NGGP_MIX_VERIFY_LEVEL one of "
            "'quick', 'default'"
        )
    if not config.logging.is_valid():
        raise ValueError(f"Unknown LOG_LEVEL: {config.logging.level}")

    return config
