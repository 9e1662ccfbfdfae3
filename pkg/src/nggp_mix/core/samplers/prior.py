"""Forward simulation of partitions from the NGGP prior."""

import logging
import math
import warnings
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import special

from ...types import HyperpriorConfig, NggpParams, PartitionShape
from ..errors import TruncationWarning
from ..nggp import expected_atom_count, small_mass_fraction
from .thinning import binned_thinning

logger = logging.getLogger(__name__)

NEGLECTED_MASS = 1e-6
PRIOR_MAX_ATOMS = 10_000_000
BISECTION_STEPS = 60


def truncation_threshold(
    p: NggpParams, max_atoms: int = PRIOR_MAX_ATOMS, neglected: float = NEGLECTED_MASS
) -> Tuple[float, float]:
    """Smallest simulated jump size for prior draws.

    The threshold S solves small_mass_fraction(S) = ``neglected``, the share of
    the expected total mass left in jumps below S. If that needs more than
    ``max_atoms`` expected jumps, S is raised by bisection on log S until the
    expected count fits, and a TruncationWarning is issued.

    Returns:
        (S, expected neglected mass fraction at S)
    """
    if not 0.0 < neglected < 1.0:
        raise ValueError(f"neglected must lie in (0, 1), got {neglected}")
    threshold = float(special.gammaincinv(1.0 - p.sigma, neglected)) / p.tau
    if expected_atom_count(threshold, 0.0, p) <= max_atoms:
        return threshold, small_mass_fraction(threshold, p)

    lo, hi = math.log(threshold), math.log(threshold)
    while expected_atom_count(math.exp(hi), 0.0, p) > max_atoms:
        hi += 1.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if expected_atom_count(math.exp(mid), 0.0, p) > max_atoms:
            lo = mid
        else:
            hi = mid
    threshold = math.exp(hi)
    fraction = small_mass_fraction(threshold, p)
    message = (
        f"Atom cap {max_atoms} raised the truncation threshold to {threshold:.3g}; "
        f"expected neglected mass fraction {fraction:.3g}"
    )
    logger.warning(message)
    warnings.warn(message, TruncationWarning, stacklevel=2)
    return threshold, fraction


def dust_mass(fraction: float, p: NggpParams) -> float:
    """Expected total mass of the jumps left below the threshold."""
    # expected total mass is a * tau^(sigma-1)
    return fraction * p.a * p.tau ** (p.sigma - 1.0)


def prior_partition_simulate(
    n: int,
    p: NggpParams,
    rng: np.random.Generator,
    max_atoms: int = PRIOR_MAX_ATOMS,
    threshold: Optional[Tuple[float, float]] = None,
    neglected: float = NEGLECTED_MASS,
) -> PartitionShape:
    """Draw the cluster sizes of n observations from the NGGP prior.

    Jumps above the truncation threshold are simulated by ``binned_thinning``.
    The jumps below it carry their expected total mass as dust: an observation
    that lands in the dust opens its own cluster.

    Args:
        n: Number of observations, at least 1
        p: NGGP parameters
        rng: Random generator
        max_atoms: Cap on the expected number of simulated jumps
        threshold: Precomputed ``truncation_threshold`` result, reused across draws
        neglected: Target share of the expected mass left as dust

    Returns:
        Cluster sizes in order of first appearance
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if threshold is None:
        threshold = truncation_threshold(p, max_atoms, neglected)
    cutoff, fraction = threshold

    masses = binned_thinning(cutoff, 0.0, p, rng)
    weights = np.append(masses, dust_mass(fraction, p))
    weights /= weights.sum()
    draws = rng.choice(weights.size, size=n, p=weights)

    dust_index = weights.size - 1
    atoms, first, counts = np.unique(draws, return_index=True, return_counts=True)
    in_atoms = atoms != dust_index
    positions = np.concatenate([first[in_atoms], np.flatnonzero(draws == dust_index)])
    sizes = np.concatenate([counts[in_atoms], np.ones(positions.size - in_atoms.sum(), int)])
    return PartitionShape.from_sizes(sizes[np.argsort(positions)].tolist())


def cluster_count_histogram(
    n: int,
    p: NggpParams,
    reps: int,
    rng: np.random.Generator,
    max_atoms: int = PRIOR_MAX_ATOMS,
    neglected: float = NEGLECTED_MASS,
) -> np.ndarray:
    """Counts of simulated |pi_n| values; entry k holds the number of draws with k clusters."""
    threshold = truncation_threshold(p, max_atoms, neglected)
    counts = np.zeros(n + 1, dtype=np.int64)
    for _ in range(reps):
        counts[prior_partition_simulate(n, p, rng, threshold=threshold).num_clusters] += 1
    return counts


def cluster_count_moments(
    n: int,
    hyper: HyperpriorConfig,
    tau: float,
    num_hyper_draws: int,
    reps: int,
    rng: np.random.Generator,
    max_atoms: int = PRIOR_MAX_ATOMS,
    neglected: float = NEGLECTED_MASS,
) -> List[Dict[str, float]]:
    """Mean and standard deviation of |pi_n| for hyperparameters drawn from their priors.

    a ~ Gamma(alpha_a, beta_a) and sigma ~ Beta(alpha_sigma, beta_sigma); one row
    per hyperparameter draw.
    """
    rows = []
    for _ in range(num_hyper_draws):
        a = rng.gamma(hyper.alpha_a) / hyper.beta_a
        sigma = rng.beta(hyper.alpha_sigma, hyper.beta_sigma)
        p = NggpParams(a=a, sigma=sigma, tau=tau)
        threshold = truncation_threshold(p, max_atoms, neglected)
        k = np.array(
            [
                prior_partition_simulate(n, p, rng, threshold=threshold).num_clusters
                for _ in range(reps)
            ],
            dtype=float,
        )
        rows.append(
            {
                "a": float(a),
                "sigma": float(sigma),
                "mean_clusters": float(k.mean()),
                "sd_clusters": float(k.std(ddof=1)) if reps > 1 else 0.0,
            }
        )
    return rows
