"""Reuse sampler: a permanent pool of C empty clusters.

Label moves are Metropolis-Hastings proposals whose acceptance probability is
one. The four move types, named by the origin and destination of observation i:

- ``c=>c'``: i leaves a non-singleton cluster for an occupied cluster.
- ``c=>k'``: i leaves a non-singleton cluster for pool slot k', which is refilled from mu0.
- ``k=>c'``: i was a singleton; its parameter overwrites a random pool slot and i
  joins an occupied cluster.
- ``k=>k'``: i was a singleton; as above, then i opens a cluster at pool slot k'.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np
from scipy.special import logsumexp

from ...types import NggpParams, PartitionShape
from ..kernels import GaussianComponent, KernelBase, log_prior_density, sample_component_prior
from ..nggp import log_joint_partition_u
from .hyper import update_base_measure, update_cluster_parameters, update_hyperparameters
from .state import ChainState, draw_log_categorical

logger = logging.getLogger(__name__)


def refill_pool(state: ChainState, rng: np.random.Generator, C: int) -> ChainState:
    """Replace the empty pool with C fresh draws from mu0."""
    state.empty_pool = [sample_component_prior(state.base, rng) for _ in range(C)]
    return state


def sweep_reuse(
    state: ChainState, data: np.ndarray, rng: np.random.Generator, C: int = 2
) -> ChainState:
    """One sweep of the Reuse sampler.

    After the label pass the occupied-cluster parameters are redrawn, the pool
    is discarded, U, the hyperparameters and Sigma0 are updated with the pool
    marginalized, and the pool is refilled from the updated mu0.
    """
    if state.empty_pool is None or len(state.empty_pool) != C:
        refill_pool(state, rng, C)
    partition = state.partition
    pool = state.empty_pool
    p = state.params
    log_new = math.log(p.a) + p.sigma * math.log(state.u.u + p.tau) - math.log(C)

    for i in state.visit_order(rng):
        y = data[i]
        receipt = partition.detach(i)
        if receipt.emptied:
            pool[int(rng.integers(C))] = receipt.param

        cids = partition.cluster_ids
        k = len(cids)
        log_w = np.empty(k + C)
        for j, cid in enumerate(cids):
            log_w[j] = math.log(partition.size(cid) - p.sigma) + partition.param(cid).log_pdf(y)
        for j, component in enumerate(pool):
            log_w[k + j] = log_new + component.log_pdf(y)

        choice = draw_log_categorical(log_w, rng)
        if choice < k:
            partition.attach(i, cids[choice])
        else:
            slot = choice - k
            partition.attach(i, None, pool[slot])
            pool[slot] = sample_component_prior(state.base, rng)
        assert len(pool) == C

    update_cluster_parameters(state, rng)
    state.empty_pool = None
    update_hyperparameters(state, rng)
    update_base_measure(state, rng, components=partition.params())
    refill_pool(state, rng, C)
    return state


# -- explicit acceptance-ratio audit ---------------------------------------


@dataclass
class ReuseSnapshot:
    """Immutable view of the Reuse state: labels, cluster parameters and pool."""

    labels: np.ndarray
    components: Dict[int, GaussianComponent]
    pool: List[GaussianComponent]

    def shape(self) -> PartitionShape:
        _, sizes = np.unique(self.labels, return_counts=True)
        return PartitionShape.from_sizes(sizes)


@dataclass
class ReuseProposal:
    """A proposed move with its forward and reverse proposal log probabilities."""

    move: str
    observation: int
    proposed: ReuseSnapshot
    log_q_forward: float
    log_q_reverse: float


def reuse_log_target(
    snapshot: ReuseSnapshot, data: np.ndarray, u: float, p: NggpParams, base: KernelBase
) -> float:
    """log density of the extended Reuse target.

    Joint law of (partition, U), mu0 densities of the cluster parameters and the
    pool, and the likelihood of the data.
    """
    total = log_joint_partition_u(snapshot.shape(), u, p)
    for cid, component in snapshot.components.items():
        total += log_prior_density(component, base)
        total += float(component.log_pdf_many(data[snapshot.labels == cid]).sum())
    for component in snapshot.pool:
        total += log_prior_density(component, base)
    return total


def propose_reuse_move(
    snapshot: ReuseSnapshot,
    i: int,
    data: np.ndarray,
    u: float,
    p: NggpParams,
    base: KernelBase,
    rng: np.random.Generator,
) -> ReuseProposal:
    """Draw one Reuse label move for observation i without touching ``snapshot``."""
    C = len(snapshot.pool)
    labels = snapshot.labels.copy()
    components = dict(snapshot.components)
    pool = list(snapshot.pool)
    y = data[i]

    origin = int(labels[i])
    singleton = int((labels == origin).sum()) == 1
    log_fwd = 0.0
    log_rev = 0.0
    overwritten = None
    slot_k = None
    if singleton:
        slot_k = int(rng.integers(C))
        overwritten = pool[slot_k]
        pool[slot_k] = components.pop(origin)
        log_fwd -= math.log(C)
    labels[i] = -1

    cids = [cid for cid in components]
    sizes = [int((labels == cid).sum()) for cid in cids]
    log_new = math.log(p.a) + p.sigma * math.log(u + p.tau) - math.log(C)
    log_w = np.array(
        [math.log(s - p.sigma) + components[cid].log_pdf(y) for cid, s in zip(cids, sizes)]
        + [log_new + component.log_pdf(y) for component in pool]
    )
    log_z = float(logsumexp(log_w))
    choice = draw_log_categorical(log_w, rng)
    log_fwd += float(log_w[choice]) - log_z

    # reverse move returns i to its origin from the same reduced state
    if singleton:
        log_rev += float(log_w[len(cids) + slot_k]) - log_z + log_prior_density(overwritten, base)
    else:
        log_rev += float(log_w[cids.index(origin)]) - log_z

    if choice < len(cids):
        labels[i] = cids[choice]
        move = "k=>c'" if singleton else "c=>c'"
    else:
        slot = choice - len(cids)
        new_id = max(list(components) + [origin]) + 1
        labels[i] = new_id
        components[new_id] = pool[slot]
        fresh = sample_component_prior(base, rng)
        pool[slot] = fresh
        log_fwd += log_prior_density(fresh, base)
        # the reverse move first overwrites this slot with i's parameter
        log_rev -= math.log(C)
        move = "k=>k'" if singleton else "c=>k'"

    return ReuseProposal(
        move=move,
        observation=i,
        proposed=ReuseSnapshot(labels=labels, components=components, pool=pool),
        log_q_forward=log_fwd,
        log_q_reverse=log_rev,
    )


def reuse_log_acceptance_ratio(
    snapshot: ReuseSnapshot,
    proposal: ReuseProposal,
    data: np.ndarray,
    u: float,
    p: NggpParams,
    base: KernelBase,
) -> float:
    """Metropolis-Hastings log acceptance ratio of a Reuse proposal (zero in exact arithmetic)."""
    return (
        reuse_log_target(proposal.proposed, data, u, p, base)
        - reuse_log_target(snapshot, data, u, p, base)
        + proposal.log_q_reverse
        - proposal.log_q_forward
    )
