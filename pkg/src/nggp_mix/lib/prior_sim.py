"""Prior exploration of the number of clusters."""

import csv
import logging
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from ..core.samplers import cluster_count_histogram, cluster_count_moments
from ..types import HyperpriorConfig, NggpParams
from .run import make_rng

logger = logging.getLogger(__name__)


def prior_histograms(
    ns: Sequence[int],
    params: Sequence[NggpParams],
    reps: int,
    seed: int = 0,
    max_atoms: int = 10_000_000,
    neglected: float = 1e-6,
) -> List[Dict]:
    """Distribution of |pi_n| for each (n, parameters) pair.

    Returns:
        Rows with n, a, sigma, tau, num_clusters, count and probability; only
        cluster counts that were observed are listed.
    """
    rng = make_rng(seed)
    rows = []
    for p in params:
        for n in ns:
            logger.info(f"Simulating {reps} prior partitions of n={n}: a={p.a}, sigma={p.sigma}")
            counts = cluster_count_histogram(
                n, p, reps, rng, max_atoms=max_atoms, neglected=neglected
            )
            for k in np.flatnonzero(counts).tolist():
                rows.append(
                    {
                        "n": n,
                        "a": p.a,
                        "sigma": p.sigma,
                        "tau": p.tau,
                        "num_clusters": k,
                        "count": int(counts[k]),
                        "probability": float(counts[k]) / reps,
                    }
                )
    return rows


def prior_moments(
    n: int,
    hyper: HyperpriorConfig,
    tau: float,
    num_hyper_draws: int,
    reps: int,
    seed: int = 0,
    max_atoms: int = 10_000_000,
    neglected: float = 1e-6,
) -> List[Dict]:
    """Induced prior on the mean and sd of |pi_n| under the a and sigma hyperpriors."""
    rng = make_rng(seed)
    logger.info(f"Drawing {num_hyper_draws} hyperparameter settings for n={n}")
    rows = cluster_count_moments(
        n, hyper, tau, num_hyper_draws, reps, rng, max_atoms=max_atoms, neglected=neglected
    )
    for row in rows:
        row["n"] = n
    return rows


def write_rows(rows: List[Dict], path: Path) -> None:
    """Write dict rows as CSV; the column order is that of the first row."""
    if not rows:
        logger.warning("Nothing to write")
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"Wrote {len(rows)} rows to {path}")
