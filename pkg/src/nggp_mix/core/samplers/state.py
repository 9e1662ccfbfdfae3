"""Chain state shared by the sweep operators."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ...types import AuxiliaryU, HyperpriorConfig, NggpParams
from ..kernels import (
    GaussianComponent,
    GaussianStats,
    KernelBase,
    sample_component_posterior,
)
from ..nggp import cond_density_v_mode
from ..partition import Partition

logger = logging.getLogger(__name__)


@dataclass
class AtomSet:
    """Instantiated atoms of the posterior random measure (slice sampler).

    Fixed atoms sit at the occupied clusters (their locations are the cluster
    parameters held by the partition); random atoms are stored as arrays.
    """

    fixed_masses: Dict[int, float] = field(default_factory=dict)
    random_masses: np.ndarray = field(default_factory=lambda: np.empty(0))
    random_means: Optional[np.ndarray] = None
    random_covs: Optional[np.ndarray] = None

    @property
    def num_random(self) -> int:
        return int(self.random_masses.size)


@dataclass
class AcceptanceCounter:
    """Proposal and acceptance counts of Metropolis-Hastings updates."""

    proposed: Dict[str, int] = field(default_factory=dict)
    accepted: Dict[str, int] = field(default_factory=dict)

    def record(self, name: str, accepted: bool) -> None:
        self.proposed[name] = self.proposed.get(name, 0) + 1
        self.accepted[name] = self.accepted.get(name, 0) + int(accepted)

    def rates(self) -> Dict[str, float]:
        return {name: self.accepted[name] / count for name, count in self.proposed.items()}


@dataclass
class ChainState:
    """Everything one chain carries between sweeps."""

    partition: Partition
    u: AuxiliaryU
    params: NggpParams
    base: KernelBase
    hyper: HyperpriorConfig
    atoms: Optional[AtomSet] = None
    slices: Optional[np.ndarray] = None
    empty_pool: Optional[List[GaussianComponent]] = None
    random_scan: bool = False
    max_atoms: int = 1_000_000
    atom_floor: float = 1e-8
    acceptance: AcceptanceCounter = field(default_factory=AcceptanceCounter)

    @property
    def data(self) -> np.ndarray:
        return self.partition.data

    def visit_order(self, rng: np.random.Generator):
        """Observation order for one sweep."""
        n = self.partition.n
        return rng.permutation(n) if self.random_scan else range(n)


def draw_log_categorical(log_weights: np.ndarray, rng: np.random.Generator) -> int:
    """Sample an index with probability proportional to exp(log_weights)."""
    shifted = np.exp(log_weights - np.max(log_weights))
    cumulative = np.cumsum(shifted)
    index = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
    return min(index, len(cumulative) - 1)


def make_partition(data: np.ndarray, labels=None, params=None) -> Partition:
    """Partition of the data with Gaussian sufficient statistics tracked per cluster."""
    dim = data.shape[1]
    if labels is None:
        labels = np.zeros(data.shape[0], dtype=np.int64)
    return Partition.from_labels(
        labels, params=params, data=data, stats_factory=lambda: GaussianStats(dim)
    )


def init_chain_state(
    data: np.ndarray,
    params: NggpParams,
    base: KernelBase,
    hyper: HyperpriorConfig,
    rng: np.random.Generator,
    sampled: bool,
    random_scan: bool = False,
    max_atoms: int = 1_000_000,
    atom_floor: float = 1e-8,
) -> ChainState:
    """Start a chain with all observations in one cluster and U at its conditional mode.

    Args:
        data: (n, D) observations
        params: Initial NGGP parameters
        base: Base measure (initial Sigma0)
        hyper: Hyperpriors and update switches
        rng: Random generator of this chain
        sampled: Instantiate cluster parameters (all samplers but marg-conj)
        random_scan: Visit observations in random order
        max_atoms: Cap on random atoms (slice sampler)
        atom_floor: Smallest random-atom mass times (U + tau) (slice sampler)

    Returns:
        ChainState ready for the first sweep
    """
    partition = make_partition(data)
    if sampled:
        for cid in partition.cluster_ids:
            partition.set_param(
                cid, sample_component_posterior(partition.stats(cid), base, rng)
            )
    v = cond_density_v_mode(partition.shape(), params)
    logger.debug(f"Initial state: n={partition.n}, |pi|=1, log U={v:.4f}")
    return ChainState(
        partition=partition,
        u=AuxiliaryU(v=v),
        params=params,
        base=base,
        hyper=hyper,
        random_scan=random_scan,
        max_atoms=max_atoms,
        atom_floor=atom_floor,
    )
