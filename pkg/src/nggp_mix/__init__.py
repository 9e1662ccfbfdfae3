"""nggp-mix: MCMC for normalized generalized Gamma process mixture models."""

# Public API - types and configuration
from .types import (
    NggpParams,
    HyperpriorConfig,
    RunConfig,
    GewekeConfig,
    RuntimeSettings,
    PartitionShape,
    AuxiliaryU,
    ChainSample,
    SampleTrace,
    RunSummary,
    DensityGrid,
    VerifyReport,
)

# Public API - simplified operations
from .api import (
    run,
    verify,
    prior_histograms,
    prior_moments,
)

# Data loading
from .lib.load_data import load_csv

__all__ = [
    # Types and configuration
    "NggpParams",
    "HyperpriorConfig",
    "RunConfig",
    "GewekeConfig",
    "RuntimeSettings",
    "PartitionShape",
    "AuxiliaryU",
    "ChainSample",
    "SampleTrace",
    "RunSummary",
    "DensityGrid",
    "VerifyReport",
    # Operations
    "run",
    "verify",
    "prior_histograms",
    "prior_moments",
    "load_csv",
]

__version__ = "0.1.0"
