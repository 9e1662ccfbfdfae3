"""Simplified API layer for nggp-mix that handles runtime settings."""

import logging
from typing import Dict, List, Optional, Sequence

from .types import (
    HyperpriorConfig,
    NggpParams,
    RunConfig,
    RunSummary,
    RuntimeSettings,
    VerifyReport,
)
from .types.config import load_config
from .lib.prior_sim import prior_histograms as prior_histograms_lib
from .lib.prior_sim import prior_moments as prior_moments_lib
from .lib.run import run as run_lib
from .lib.verify import verify as verify_lib

logger = logging.getLogger(__name__)

_runtime_settings: Optional[RuntimeSettings] = None


def _get_runtime_settings() -> RuntimeSettings:
    """Get cached runtime settings."""
    global _runtime_settings
    if _runtime_settings is None:
        _runtime_settings = load_config().runtime
    return _runtime_settings


def run(config: RunConfig) -> RunSummary:
    """Run MCMC on a data file and write samples, labels, co-clustering and summary.

    Args:
        config: Run configuration (data path, model, sampler, schedule, priors)

    Returns:
        RunSummary also written to summary.json in the output directory
    """
    return run_lib(config, _get_runtime_settings())


def verify(level: Optional[str] = None, seed: int = 0) -> VerifyReport:
    """Run the oracle suite.

    Args:
        level: 'quick' or 'default'; NGGP_MIX_VERIFY_LEVEL when omitted
        seed: Seed of the Monte Carlo checks

    Returns:
        VerifyReport with one entry per check
    """
    return verify_lib(level or _get_runtime_settings().verify_level, seed)


def prior_histograms(
    ns: Sequence[int], params: Sequence[NggpParams], reps: int, seed: int = 0
) -> List[Dict]:
    """Prior distribution of the number of clusters for fixed parameters.

    Args:
        ns: Numbers of observations
        params: NGGP parameter settings
        reps: Simulated partitions per (n, parameters)
        seed: Random seed

    Returns:
        Histogram rows (n, a, sigma, tau, num_clusters, count, probability)
    """
    settings = _get_runtime_settings()
    return prior_histograms_lib(
        ns,
        params,
        reps,
        seed,
        max_atoms=settings.prior_max_atoms,
        neglected=settings.neglected_mass,
    )


def prior_moments(
    n: int,
    hyper: HyperpriorConfig,
    tau: float,
    num_hyper_draws: int,
    reps: int,
    seed: int = 0,
) -> List[Dict]:
    """Induced prior on the mean and sd of the number of clusters.

    Args:
        n: Number of observations
        hyper: Gamma prior on a and Beta prior on sigma
        tau: Fixed tau
        num_hyper_draws: Hyperparameter draws
        reps: Simulated partitions per draw
        seed: Random seed

    Returns:
        Rows (a, sigma, mean_clusters, sd_clusters, n)
    """
    settings = _get_runtime_settings()
    return prior_moments_lib(
        n,
        hyper,
        tau,
        num_hyper_draws,
        reps,
        seed,
        max_atoms=settings.prior_max_atoms,
        neglected=settings.neglected_mass,
    )
