"""nggp-mix public types and configuration."""

# Configuration classes
from .config import (
    RuntimeSettings,
    NggpMixConfig,
    LoggingSettings,
    load_config,
)

# Validated models
from .models import (
    NggpParams,
    HyperpriorConfig,
    RunConfig,
    GewekeConfig,
)

# Result types
from .types import (
    PartitionShape,
    AuxiliaryU,
    ChainSample,
    SampleTrace,
    RunSummary,
    DensityGrid,
    SetPartitionList,
    CheckResult,
    VerifyReport,
)

__all__ = [
    # Configuration
    "RuntimeSettings",
    "NggpMixConfig",
    "LoggingSettings",
    "load_config",
    # Models
    "NggpParams",
    "HyperpriorConfig",
    "RunConfig",
    "GewekeConfig",
    # Result types
    "PartitionShape",
    "AuxiliaryU",
    "ChainSample",
    "SampleTrace",
    "RunSummary",
    "DensityGrid",
    "SetPartitionList",
    "CheckResult",
    "VerifyReport",
]
