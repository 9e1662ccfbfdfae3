"""Post-processing of retained samples."""

import logging
from dataclasses import replace
from typing import Optional

import numpy as np

from ..types import DensityGrid, SampleTrace
from .kernels import (
    ConjugateNormalBase,
    GaussianStats,
    KernelBase,
    predictive_density,
    prior_predictive_density,
)

logger = logging.getLogger(__name__)

MIN_ESS_LENGTH = 10


def autocorrelation(series: np.ndarray) -> np.ndarray:
    """Sample autocorrelation at every lag, computed with a zero-padded FFT."""
    x = np.asarray(series, dtype=float)
    n = x.size
    x = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(x, n=size)
    acov = np.fft.irfft(spectrum * np.conj(spectrum), n=size)[:n] / n
    return acov / acov[0]


def ess(series) -> float:
    """Effective sample size by Geyer's initial positive sequence.

    Autocorrelations are summed in adjacent pairs rho_2k + rho_2k+1 until the
    first non-positive pair. The result is clipped to [1, N]; a constant series
    returns N.
    """
    x = np.asarray(series, dtype=float)
    n = x.size
    if n < MIN_ESS_LENGTH:
        raise ValueError(f"ESS needs at least {MIN_ESS_LENGTH} values, got {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("ESS series contains non-finite values")
    if np.ptp(x) == 0.0:
        return float(n)

    rho = autocorrelation(x)
    num_pairs = n // 2
    pairs = rho[: 2 * num_pairs : 2] + rho[1 : 2 * num_pairs : 2]
    nonpositive = np.flatnonzero(pairs <= 0.0)
    stop = nonpositive[0] if nonpositive.size else num_pairs
    # 1 + 2 sum_{t>=1} rho_t = -1 + 2 sum_k (rho_2k + rho_2k+1)
    tau = -1.0 + 2.0 * pairs[:stop].sum()
    if tau <= 0:
        return float(n)
    return float(np.clip(n / tau, 1.0, n))


def coclustering(trace: SampleTrace) -> np.ndarray:
    """Posterior probability that each pair of observations shares a cluster."""
    if len(trace) == 0:
        raise ValueError("Co-clustering needs at least one sample")
    n = trace.samples[0].labels.size
    total = np.zeros((n, n))
    for sample in trace.samples:
        labels = sample.labels
        total += labels[:, None] == labels[None, :]
    return total / len(trace)


def sample_density(
    sample,
    points: np.ndarray,
    data: np.ndarray,
    base: KernelBase,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Predictive density of the next observation for one retained sample.

    Occupied clusters get weight (|c| - sigma) and a new cluster a(U + tau)^sigma,
    normalized by their sum. Clusters contribute f(y | X_c) when parameters were
    retained and the conjugate predictive f(y | Y_c) otherwise; the new cluster
    contributes the prior predictive under the sample's Sigma0.
    """
    points = np.asarray(points, dtype=float).reshape(-1, base.dim)
    sample_base = replace(base, Sigma0=sample.sigma0) if sample.sigma0 is not None else base
    labels = sample.labels
    sizes = np.bincount(labels)
    u = np.exp(sample.log_u)
    new_weight = sample.a * (u + sample.tau) ** sample.sigma
    denominator = new_weight + labels.size - sample.sigma * sizes.size

    density = new_weight / denominator * prior_predictive_density(points, sample_base, rng)
    for label, size in enumerate(sizes.tolist()):
        weight = (size - sample.sigma) / denominator
        if sample.components is not None:
            density += weight * np.exp(sample.components[label].log_pdf_many(points))
        elif isinstance(sample_base, ConjugateNormalBase):
            stats = GaussianStats.from_data(data[labels == label])
            density += weight * predictive_density(points[:, 0], stats, sample_base)
        else:
            raise ValueError("Nonconjugate samples need retained component parameters")
    return density


def density_grid(
    trace: SampleTrace,
    points: np.ndarray,
    data: np.ndarray,
    base: KernelBase,
    rng: Optional[np.random.Generator] = None,
    max_samples: Optional[int] = None,
) -> DensityGrid:
    """Posterior mean and pointwise 95% interval of the predictive density.

    Args:
        trace: Retained samples
        points: (G, D) grid
        data: (n, D) observations the chain was run on
        base: Base measure template; each sample supplies its own Sigma0
        rng: Generator for the nonconjugate prior predictive
        max_samples: Use at most this many evenly spaced samples

    Returns:
        DensityGrid with mean, 2.5% and 97.5% percentiles per point
    """
    samples = trace.samples
    if max_samples is not None and len(samples) > max_samples:
        keep = np.linspace(0, len(samples) - 1, max_samples).round().astype(int)
        samples = [samples[i] for i in keep]
        logger.info(f"Density grid uses {max_samples} of {len(trace)} samples")
    values = np.vstack([sample_density(s, points, data, base, rng) for s in samples])
    return DensityGrid(
        points=np.asarray(points),
        mean=values.mean(axis=0),
        lower=np.percentile(values, 2.5, axis=0),
        upper=np.percentile(values, 97.5, axis=0),
    )
