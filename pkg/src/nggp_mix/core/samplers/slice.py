"""Conditional slice sampler with instantiated atoms.

The random measure given U is the sum of fixed atoms at the occupied clusters,
with masses J_c ~ Gamma(|c| - sigma, U + tau), and a Poisson random measure of
empty atoms with the tilted Levy intensity. Slice variables S_i ~ U(0, J_{z_i})
make the set of atoms an observation can move to finite.
"""

import logging
from typing import Dict

import numpy as np

from ..kernels import (
    GaussianComponent,
    log_likelihood_matrix,
    sample_prior_batch,
    stack_components,
)
from .hyper import update_base_measure, update_cluster_parameters, update_hyperparameters
from .state import AtomSet, ChainState, make_partition
from .thinning import adaptive_thinning

logger = logging.getLogger(__name__)

# Observation-by-atom cells scored per block of the label update
LABEL_BLOCK_CELLS = 4_000_000


def draw_fixed_masses(state: ChainState, rng: np.random.Generator) -> Dict[int, float]:
    """J_c ~ Gamma(|c| - sigma, rate U + tau) for each occupied cluster."""
    partition, p = state.partition, state.params
    rate = state.u.u + p.tau
    return {
        cid: float(rng.gamma(partition.size(cid) - p.sigma) / rate)
        for cid in partition.cluster_ids
    }


def refresh_atoms(state: ChainState, rng: np.random.Generator) -> ChainState:
    """Redraw fixed masses, slice variables and the random atoms above min S_i."""
    partition = state.partition
    fixed = draw_fixed_masses(state, rng)

    assigned = np.array([fixed[label] for label in partition.labels.tolist()])
    # 1 - U(0,1) lies in (0, 1], so 0 < S_i <= J_{z_i}
    state.slices = assigned * (1.0 - rng.random(partition.n))

    # atom_floor is measured in units of the mass scale 1 / (U + tau)
    scale = 1.0 / (state.u.u + state.params.tau)
    threshold = max(float(state.slices.min()), state.atom_floor * scale)
    masses = adaptive_thinning(threshold, state.u, state.params, rng, max_atoms=state.max_atoms)
    means, covs = sample_prior_batch(state.base, masses.size, rng)
    state.atoms = AtomSet(
        fixed_masses=fixed, random_masses=masses, random_means=means, random_covs=covs
    )
    return state


def update_labels(state: ChainState, data: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw every label among atoms heavier than its slice variable.

    The draws are independent given atoms and slices; they are done at once with
    the Gumbel-max trick. Returns the chosen atom index per observation, where
    fixed atoms come first in ``partition.cluster_ids`` order.
    """
    partition, atoms = state.partition, state.atoms
    cids = partition.cluster_ids
    fixed_means, fixed_covs = stack_components(partition.params())
    means = np.concatenate([fixed_means, atoms.random_means])
    covs = np.concatenate([fixed_covs, atoms.random_covs])
    masses = np.concatenate([[atoms.fixed_masses[cid] for cid in cids], atoms.random_masses])

    n = data.shape[0]
    rows = max(1, LABEL_BLOCK_CELLS // max(masses.size, 1))
    choice = np.empty(n, dtype=np.int64)
    for start in range(0, n, rows):
        stop = min(start + rows, n)
        log_lik = log_likelihood_matrix(data[start:stop], means, covs)
        eligible = masses[None, :] >= state.slices[start:stop, None]
        scores = np.where(eligible, log_lik + rng.gumbel(size=log_lik.shape), -np.inf)
        choice[start:stop] = np.argmax(scores, axis=1)
    return choice


def sweep_slice(state: ChainState, data: np.ndarray, rng: np.random.Generator) -> ChainState:
    """One Gibbs cycle of the slice sampler.

    (1) labels given atoms and slices; (2) U and hyperparameters given the
    partition; (3) fixed-atom locations and Sigma0; (4)-(5) fixed masses, slice
    variables and random atoms via ``refresh_atoms``.
    """
    if state.atoms is None or state.slices is None:
        refresh_atoms(state, rng)

    partition, atoms = state.partition, state.atoms
    cids = partition.cluster_ids
    choice = update_labels(state, data, rng)

    num_fixed = len(cids)
    params = {j: partition.param(cid) for j, cid in enumerate(cids)}
    for j in np.unique(choice[choice >= num_fixed]).tolist():
        r = j - num_fixed
        params[j] = GaussianComponent(atoms.random_means[r], atoms.random_covs[r])
    state.partition = make_partition(data, labels=choice, params=params)

    update_hyperparameters(state, rng)
    update_cluster_parameters(state, rng)
    update_base_measure(state, rng, components=state.partition.params())
    refresh_atoms(state, rng)
    logger.debug(
        f"Slice sweep: |pi|={state.partition.num_clusters}, "
        f"random atoms={state.atoms.num_random}"
    )
    return state

