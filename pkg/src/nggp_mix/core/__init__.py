"""Numerical core of nggp-mix: NGGP calculus, kernels, samplers and oracles."""

# Errors
from .errors import (
    ConfigurationError,
    DataFormatError,
    NggpMixError,
    OracleError,
    TruncationWarning,
)

# Partition bookkeeping
from .partition import DetachReceipt, Partition

# Configuration
from ..types.config import load_config, NggpMixConfig

__all__ = [
    # Errors
    "ConfigurationError",
    "DataFormatError",
    "NggpMixError",
    "OracleError",
    "TruncationWarning",
    # Partition
    "DetachReceipt",
    "Partition",
    # Configuration
    "load_config",
    "NggpMixConfig",
]
