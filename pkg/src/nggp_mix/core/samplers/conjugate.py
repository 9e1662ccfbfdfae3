"""Marginal Gibbs sampler for conjugate kernels."""

import logging
import math

import numpy as np

from ..errors import ConfigurationError
from ..kernels import ConjugateNormalBase, log_predictive_many, log_prior_predictive
from .hyper import update_base_measure, update_hyperparameters
from .state import ChainState, draw_log_categorical

logger = logging.getLogger(__name__)


def sweep_conjugate_marginal(
    state: ChainState, data: np.ndarray, rng: np.random.Generator
) -> ChainState:
    """One sweep of the collapsed Gibbs sampler.

    Each label is drawn with weight (|c| - sigma) f(y_i | Y_c) for an existing
    cluster and a (U + tau)^sigma f(y_i) for a new one; U and the hyperparameters
    follow.
    """
    base = state.base
    if not isinstance(base, ConjugateNormalBase):
        raise ConfigurationError("The marginal sampler needs the conjugate model")

    partition = state.partition
    p = state.params
    log_new = math.log(p.a) + p.sigma * math.log(state.u.u + p.tau)
    log_prior_pred = log_prior_predictive(data[:, 0], base)

    for i in state.visit_order(rng):
        partition.detach(i)
        cids = partition.cluster_ids
        k = len(cids)
        counts = np.empty(k)
        totals = np.empty(k)
        outers = np.empty(k)
        for j, cid in enumerate(cids):
            stats = partition.stats(cid)
            counts[j] = stats.count
            totals[j] = stats.total[0]
            outers[j] = stats.outer[0, 0]

        log_w = np.empty(k + 1)
        log_w[:k] = np.log(counts - p.sigma) + log_predictive_many(
            data[i, 0], counts, totals, outers, base
        )
        log_w[k] = log_new + log_prior_pred[i]
        choice = draw_log_categorical(log_w, rng)
        partition.attach(i, cids[choice] if choice < k else None)

    update_hyperparameters(state, rng)
    update_base_measure(state, rng)
    return state
