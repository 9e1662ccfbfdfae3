"""Generalized Algorithm 8 with C temporary empty clusters."""

import logging
import math
from typing import List

import numpy as np

from ...types import NggpParams
from ..kernels import GaussianComponent, KernelBase, sample_component_prior
from ..partition import DetachReceipt, Partition
from .hyper import update_base_measure, update_cluster_parameters, update_hyperparameters
from .state import ChainState, draw_log_categorical

logger = logging.getLogger(__name__)


def log_temporary_mass(u: float, p: NggpParams, C: int) -> float:
    """log of (a/C)(U + tau)^sigma, the prior weight of each temporary cluster."""
    return math.log(p.a) + p.sigma * math.log(u + p.tau) - math.log(C)


def draw_temporaries(
    receipt: DetachReceipt, base: KernelBase, C: int, rng: np.random.Generator
) -> List[GaussianComponent]:
    """C temporary components from mu0; a detached singleton keeps the first slot."""
    if receipt.emptied:
        return [receipt.param] + [sample_component_prior(base, rng) for _ in range(C - 1)]
    return [sample_component_prior(base, rng) for _ in range(C)]


def neal8_log_weights(
    partition: Partition,
    y: np.ndarray,
    temporaries: List[GaussianComponent],
    log_new: float,
    sigma: float,
) -> np.ndarray:
    """Label log weights: occupied clusters in ``cluster_ids`` order, then temporaries."""
    cids = partition.cluster_ids
    k = len(cids)
    log_w = np.empty(k + len(temporaries))
    for j, cid in enumerate(cids):
        log_w[j] = math.log(partition.size(cid) - sigma) + partition.param(cid).log_pdf(y)
    for j, component in enumerate(temporaries):
        log_w[k + j] = log_new + component.log_pdf(y)
    return log_w


def sweep_neal8(
    state: ChainState, data: np.ndarray, rng: np.random.Generator, C: int = 2
) -> ChainState:
    """One sweep of the auxiliary-cluster sampler.

    For each observation, C temporary clusters are drawn from mu0 (a detached
    singleton keeps its parameter in the first slot) and the label is drawn
    with weight (|c| - sigma) f(y_i | X_c) for occupied clusters and
    (a/C)(U + tau)^sigma f(y_i | X_e) for temporaries. Cluster parameters,
    U, the hyperparameters and Sigma0 are updated after the label pass.
    """
    if C < 1:
        raise ValueError(f"C must be a positive integer, got {C}")
    partition = state.partition
    p = state.params
    log_new = log_temporary_mass(state.u.u, p, C)

    for i in state.visit_order(rng):
        y = data[i]
        receipt = partition.detach(i)
        temporaries = draw_temporaries(receipt, state.base, C, rng)

        cids = partition.cluster_ids
        log_w = neal8_log_weights(partition, y, temporaries, log_new, p.sigma)
        choice = draw_log_categorical(log_w, rng)
        if choice < len(cids):
            partition.attach(i, cids[choice])
        else:
            partition.attach(i, None, temporaries[choice - len(cids)])

    update_cluster_parameters(state, rng)
    update_hyperparameters(state, rng)
    update_base_measure(state, rng, components=partition.params())
    return state
