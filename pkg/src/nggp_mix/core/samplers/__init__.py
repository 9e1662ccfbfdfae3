"""MCMC sweep operators over a shared chain state."""

from functools import partial
from typing import Callable

import numpy as np

from .conjugate import sweep_conjugate_marginal
from .hyper import (
    slice_sample,
    update_a,
    update_base_measure,
    update_cluster_parameters,
    update_hyperparameters,
    update_sigma,
    update_tau,
    update_u,
)
from .neal8 import sweep_neal8
from .prior import (
    cluster_count_histogram,
    cluster_count_moments,
    prior_partition_simulate,
    truncation_threshold,
)
from .reuse import (
    ReuseProposal,
    ReuseSnapshot,
    propose_reuse_move,
    refill_pool,
    reuse_log_acceptance_ratio,
    reuse_log_target,
    sweep_reuse,
)
from .slice import refresh_atoms, sweep_slice
from .state import AcceptanceCounter, AtomSet, ChainState, init_chain_state, make_partition
from .thinning import adaptive_thinning, binned_thinning

Sweep = Callable[[ChainState, np.ndarray, np.random.Generator], ChainState]

# Samplers that instantiate cluster parameters
SAMPLED = ("neal8", "reuse", "slice")


def make_sweep(sampler: str, C: int = 2) -> Sweep:
    """Sweep operator for a sampler name ('marg-conj', 'neal8', 'reuse', 'slice')."""
    if sampler == "marg-conj":
        return sweep_conjugate_marginal
    if sampler == "neal8":
        return partial(sweep_neal8, C=C)
    if sampler == "reuse":
        return partial(sweep_reuse, C=C)
    if sampler == "slice":
        return sweep_slice
    raise ValueError(f"Unknown sampler: {sampler}")


__all__ = [
    "AcceptanceCounter",
    "AtomSet",
    "ChainState",
    "ReuseProposal",
    "ReuseSnapshot",
    "SAMPLED",
    "Sweep",
    "adaptive_thinning",
    "binned_thinning",
    "cluster_count_histogram",
    "cluster_count_moments",
    "init_chain_state",
    "make_partition",
    "make_sweep",
    "prior_partition_simulate",
    "propose_reuse_move",
    "refill_pool",
    "refresh_atoms",
    "reuse_log_acceptance_ratio",
    "reuse_log_target",
    "slice_sample",
    "sweep_conjugate_marginal",
    "sweep_neal8",
    "sweep_reuse",
    "sweep_slice",
    "truncation_threshold",
    "update_a",
    "update_base_measure",
    "update_cluster_parameters",
    "update_hyperparameters",
    "update_sigma",
    "update_tau",
    "update_u",
]
