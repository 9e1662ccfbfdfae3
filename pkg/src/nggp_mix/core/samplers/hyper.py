"""Updates of U, the NGGP hyperparameters and the base-measure scale Sigma0.

Each update targets its full conditional given the partition shape only, so it
is shared by the marginal and the conditional samplers.
"""

import logging
import math
from typing import Callable, List, Optional

import numpy as np
from scipy.special import xlog1py, xlogy

from ...types import AuxiliaryU, NggpParams, PartitionShape
from ..kernels import GaussianComponent, sample_component_posterior, update_sigma0
from ..nggp import log_cond_density_v, log_joint_partition_u, psi
from .state import ChainState

logger = logging.getLogger(__name__)


def slice_sample(
    x0: float,
    log_density: Callable[[float], float],
    rng: np.random.Generator,
    width: float,
    lower: float = -math.inf,
    upper: float = math.inf,
) -> float:
    """One univariate slice-sampling update with stepping out and shrinkage.

    The bracket grows in steps of ``width`` until both ends leave the slice or
    hit the support bounds; there is no cap on the number of steps.
    """
    log_y = log_density(x0) + math.log(rng.random())

    left = x0 - width * rng.random()
    right = left + width
    left, right = max(left, lower), min(right, upper)
    while left > lower and log_density(left) > log_y:
        left = max(left - width, lower)
    while right < upper and log_density(right) > log_y:
        right = min(right + width, upper)

    while True:
        x = left + rng.random() * (right - left)
        if log_density(x) > log_y:
            return x
        if x < x0:
            left = x
        else:
            right = x


def update_u(state: ChainState, rng: np.random.Generator) -> ChainState:
    """One Gaussian random-walk Metropolis-Hastings step on V = log U."""
    shape = state.partition.shape()
    v = state.u.v
    v_new = v + state.hyper.u_proposal_sd * rng.standard_normal()
    log_ratio = log_cond_density_v(v_new, shape, state.params) - log_cond_density_v(
        v, shape, state.params
    )
    accepted = math.log(rng.random()) < log_ratio
    if accepted:
        state.u = AuxiliaryU(v=v_new)
    state.acceptance.record("u", accepted)
    return state


def update_a(state: ChainState, rng: np.random.Generator) -> ChainState:
    """Exact Gamma(alpha_a + |pi|, beta_a + psi(U)/a) draw of the mass parameter."""
    if not state.hyper.infer_a:
        return state
    p = state.params
    unit = p.model_copy(update={"a": 1.0})
    shape = state.hyper.alpha_a + state.partition.num_clusters
    rate = state.hyper.beta_a + float(psi(state.u.u, unit))
    state.params = p.model_copy(update={"a": rng.gamma(shape) / rate})
    return state


def _log_tau_target(tau: float, shape: PartitionShape, u: float, p: NggpParams, hyper) -> float:
    # Gamma prior plus the Jacobian of tau -> log tau
    candidate = p.model_copy(update={"tau": tau})
    return (
        log_joint_partition_u(shape, u, candidate)
        + hyper.alpha_tau * math.log(tau)
        - hyper.beta_tau * tau
    )


def update_tau(state: ChainState, rng: np.random.Generator) -> ChainState:
    """One random-walk Metropolis-Hastings step on log tau."""
    if not state.hyper.infer_tau:
        return state
    shape, u, p = state.partition.shape(), state.u.u, state.params
    tau_new = p.tau * math.exp(state.hyper.tau_proposal_sd * rng.standard_normal())
    log_ratio = _log_tau_target(tau_new, shape, u, p, state.hyper) - _log_tau_target(
        p.tau, shape, u, p, state.hyper
    )
    accepted = math.log(rng.random()) < log_ratio
    if accepted:
        state.params = p.model_copy(update={"tau": tau_new})
    state.acceptance.record("tau", accepted)
    return state


def sigma_log_conditional(
    sigma: float, shape: PartitionShape, u: float, p: NggpParams, alpha: float, beta: float
) -> float:
    """Unnormalized log conditional of sigma with a Beta(alpha, beta) prior; -inf off (0, 1)."""
    if not 0.0 < sigma < 1.0:
        return -math.inf
    candidate = p.model_copy(update={"sigma": sigma})
    return (
        log_joint_partition_u(shape, u, candidate)
        + xlogy(alpha - 1.0, sigma)
        + xlog1py(beta - 1.0, -sigma)
    )


def update_sigma(state: ChainState, rng: np.random.Generator) -> ChainState:
    """One stepping-out slice-sampling update of sigma on (0, 1).

    A chain started at sigma = 0 models a Dirichlet process and keeps sigma fixed.
    """
    hyper = state.hyper
    if not hyper.infer_sigma or state.params.is_dp:
        return state
    shape, u, p = state.partition.shape(), state.u.u, state.params
    sigma = slice_sample(
        p.sigma,
        lambda s: sigma_log_conditional(s, shape, u, p, hyper.alpha_sigma, hyper.beta_sigma),
        rng,
        width=hyper.sigma_slice_width,
        lower=0.0,
        upper=1.0,
    )
    state.params = p.model_copy(update={"sigma": sigma})
    return state


def update_hyperparameters(state: ChainState, rng: np.random.Generator) -> ChainState:
    """U, then a, tau and sigma; one update each."""
    update_u(state, rng)
    update_a(state, rng)
    update_tau(state, rng)
    update_sigma(state, rng)
    return state


def update_base_measure(
    state: ChainState,
    rng: np.random.Generator,
    components: Optional[List[GaussianComponent]] = None,
) -> ChainState:
    """Gibbs update of Sigma0 given the occupied components.

    When the chain does not carry component parameters (marginal conjugate
    sampler) they are first drawn from their cluster posteriors.
    """
    if not state.hyper.infer_sigma0:
        return state
    partition = state.partition
    if components is None:
        components = [
            sample_component_posterior(partition.stats(cid), state.base, rng)
            for cid in partition.cluster_ids
        ]
    state.base = update_sigma0(components, state.base, rng)
    return state


def update_cluster_parameters(state: ChainState, rng: np.random.Generator) -> ChainState:
    """Redraw each occupied cluster's parameters given its data."""
    partition = state.partition
    for cid in partition.cluster_ids:
        partition.set_param(
            cid,
            sample_component_posterior(
                partition.stats(cid), state.base, rng, current=partition.param(cid)
            ),
        )
    return state
