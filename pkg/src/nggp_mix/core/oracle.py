"""Brute-force and numerical oracles for small problems.

Set-partition enumeration, EPPF normalization, quadrature of the Levy tail and
a joint-distribution (Geweke) test of the sweep operators.
"""

import logging
import math
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate

from ..types import (
    AuxiliaryU,
    GewekeConfig,
    HyperpriorConfig,
    NggpParams,
    PartitionShape,
    SetPartitionList,
)
from .diagnostics import ess
from .errors import OracleError
from .kernels import (
    ConjugateNormalBase,
    KernelBase,
    NonconjugateGaussianBase,
    sample_component_prior,
    sigma0_summary,
    update_sigma0,
)
from .nggp import _log_cluster_terms, log_eppf, log_levy_constant, psi
from .samplers import SAMPLED, ChainState, Sweep, make_partition, make_sweep, refresh_atoms

logger = logging.getLogger(__name__)

MAX_ENUMERATION = 10
GEWEKE_STATISTICS = (
    "num_clusters",
    "num_clusters_sq",
    "log_u",
    "log_u_sq",
    "a",
    "data_mean",
    "log_sigma0",
)

# v = log u grid of the exact (partition, U) prior sampler
V_GRID_MIN = -30.0
V_GRID_MAX = 30.0
V_GRID_POINTS = 6001

TAIL_EXPONENT_LIMIT = 745.0


def enumerate_partitions(n: int) -> SetPartitionList:
    """All set partitions of {0, ..., n-1} from restricted growth strings."""
    if n < 1:
        raise OracleError(f"n must be at least 1, got {n}")
    if n > MAX_ENUMERATION:
        raise OracleError(f"Enumeration is limited to n <= {MAX_ENUMERATION}, got {n}")

    partitions: List[List[List[int]]] = []
    growth = [0] * n
    maxima = [0] * n
    while True:
        blocks: List[List[int]] = [[] for _ in range(max(growth) + 1)]
        for i, b in enumerate(growth):
            blocks[b].append(i)
        partitions.append(blocks)

        # next restricted growth string: bump the last position that can grow
        i = n - 1
        while i > 0 and growth[i] == maxima[i - 1] + 1:
            i -= 1
        if i == 0:
            break
        growth[i] += 1
        maxima[i] = max(maxima[i - 1], growth[i])
        for j in range(i + 1, n):
            growth[j] = 0
            maxima[j] = maxima[i]
    return SetPartitionList(n=n, partitions=partitions)


def shape_multiplicities(n: int) -> Dict[Tuple[int, ...], int]:
    """Number of set partitions of [n] per sorted block-size tuple."""
    counts: Dict[Tuple[int, ...], int] = defaultdict(int)
    for shape in enumerate_partitions(n).shapes():
        counts[tuple(sorted(shape.sizes, reverse=True))] += 1
    return dict(counts)


def eppf_normalization(n: int, p: NggpParams) -> float:
    """Sum of the EPPF over every set partition of [n] (should be 1)."""
    total = 0.0
    for sizes, count in shape_multiplicities(n).items():
        total += count * math.exp(log_eppf(PartitionShape(n=n, sizes=sizes), p))
    return total


def levy_tail_rate(threshold: float, u: float, p: NggpParams) -> float:
    """Integral of the tilted Levy density over [threshold, infinity) by quadrature.

    Substitutes s = S e^x, so the integrand is v(S e^x) S e^x. The range stops
    where lam*S*e^x reaches TAIL_EXPONENT_LIMIT; beyond it the integrand is
    below exp(-TAIL_EXPONENT_LIMIT) relative to its value at x = 0.
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    lam = p.tau + u
    log_c = log_levy_constant(p)
    log_s = math.log(threshold)
    log_rate = math.log(lam * threshold)
    upper = max(math.log(TAIL_EXPONENT_LIMIT) - log_rate, 1.0)

    def integrand(x: float) -> float:
        return math.exp(log_c - p.sigma * (log_s + x) - math.exp(log_rate + x))

    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-10, limit=200)
    return value


# -- exact prior draws of the full model ----------------------------------


class JointPriorSampler:
    """Exact draws of (a, partition, U, Sigma0, components, data) for small n.

    The (partition, V) law given a is tabulated on every set-partition shape
    times a fine v grid; a cell is drawn and v is jittered uniformly within it.
    """

    def __init__(self, config: GewekeConfig, base: KernelBase):
        self.config = config
        self.base = base
        self.hyper = geweke_hyperprior(config)
        n, sigma, tau = config.n, config.sigma, config.tau

        self.labels_by_shape: List[List[np.ndarray]] = []
        grouped: Dict[Tuple[int, ...], List[np.ndarray]] = defaultdict(list)
        for blocks in enumerate_partitions(n).partitions:
            labels = np.empty(n, dtype=np.int64)
            for b, block in enumerate(blocks):
                labels[block] = b
            grouped[tuple(sorted((len(b) for b in blocks), reverse=True))].append(labels)
        shapes = list(grouped)
        self.labels_by_shape = [grouped[s] for s in shapes]

        self.v = np.linspace(V_GRID_MIN, V_GRID_MAX, V_GRID_POINTS)
        self.step = self.v[1] - self.v[0]
        log_u_tau = np.logaddexp(self.v, math.log(tau))
        unit = NggpParams(a=1.0, sigma=sigma, tau=tau)
        self.psi_unit = psi(np.exp(self.v), unit)
        self.num_clusters = np.array([len(s) for s in shapes], dtype=float)
        rows = []
        for s, labels in zip(shapes, self.labels_by_shape):
            constant = math.log(len(labels)) + _log_cluster_terms(s, sigma)
            rows.append(constant + n * self.v - (n - sigma * len(s)) * log_u_tau)
        self.log_table = np.vstack(rows)

    def draw_partition_u(self, a: float, rng: np.random.Generator) -> Tuple[np.ndarray, float]:
        """Exact draw of (labels, v) given a, up to the grid resolution."""
        log_w = (
            self.log_table
            + self.num_clusters[:, None] * math.log(a)
            - a * self.psi_unit[None, :]
        )
        flat = np.exp(log_w - log_w.max()).ravel()
        cell = int(np.searchsorted(np.cumsum(flat), rng.random() * flat.sum(), side="right"))
        cell = min(cell, flat.size - 1)
        shape_index, v_index = divmod(cell, self.v.size)
        choices = self.labels_by_shape[shape_index]
        labels = choices[int(rng.integers(len(choices)))].copy()
        v = self.v[v_index] + (rng.random() - 0.5) * self.step
        return labels, v

    def draw(self, rng: np.random.Generator):
        """One joint draw: (a, labels, v, base, components, data)."""
        a = rng.gamma(self.hyper.alpha_a) / self.hyper.beta_a
        labels, v = self.draw_partition_u(a, rng)
        base = update_sigma0([], self.base, rng)
        components = [sample_component_prior(base, rng) for _ in range(labels.max() + 1)]
        data = draw_data(labels, components, rng)
        return a, labels, v, base, components, data


def draw_data(labels: np.ndarray, components, rng: np.random.Generator) -> np.ndarray:
    """y_i ~ N(mean, cov) of the component of each observation's cluster."""
    dim = components[0].dim
    data = np.empty((labels.size, dim))
    for i, label in enumerate(labels.tolist()):
        c = components[label]
        data[i] = c.mean + c.chol @ rng.standard_normal(dim)
    return data


def geweke_base(sampler: str) -> KernelBase:
    """Unit-scale base measure for joint-distribution tests."""
    if sampler == "marg-conj":
        return ConjugateNormalBase(m0=0.0, S0=1.0, alpha0=4.0, Sigma0=1.0, beta0=4.0, gamma0=0.25)
    return NonconjugateGaussianBase(
        m0=np.zeros(1), S0=np.eye(1), alpha0=4.0, Sigma0=np.eye(1), beta0=4.0, gamma0=0.25
    )


def geweke_hyperprior(config: GewekeConfig) -> HyperpriorConfig:
    return HyperpriorConfig(
        alpha_a=config.alpha_a,
        beta_a=config.beta_a,
        infer_a=True,
        infer_sigma=False,
        infer_tau=False,
        infer_sigma0=True,
    )


def _statistics(num_clusters: int, v: float, a: float, data: np.ndarray, base) -> List[float]:
    return [
        float(num_clusters),
        float(num_clusters) ** 2,
        v,
        v * v,
        a,
        float(data.mean()),
        math.log(sigma0_summary(base)),
    ]


def marginal_conditional_statistics(
    config: GewekeConfig, rng: np.random.Generator, iterations: Optional[int] = None
) -> np.ndarray:
    """Statistics of independent exact joint draws, one column per GEWEKE_STATISTICS entry."""
    sampler = JointPriorSampler(config, geweke_base(config.sampler))
    rows = []
    for _ in range(iterations or config.iterations):
        a, labels, v, base, _, data = sampler.draw(rng)
        rows.append(_statistics(labels.max() + 1, v, a, data, base))
    return np.array(rows)


def successive_conditional_statistics(
    config: GewekeConfig,
    rng: np.random.Generator,
    sweep: Optional[Sweep] = None,
) -> np.ndarray:
    """Statistics of the chain alternating a sweep with a data redraw."""
    if sweep is None:
        sweep = make_sweep(config.sampler, config.C)
    sampler = JointPriorSampler(config, geweke_base(config.sampler))
    sampled = config.sampler in SAMPLED

    a, labels, v, base, components, data = sampler.draw(rng)
    params = dict(enumerate(components)) if sampled else None
    state = ChainState(
        partition=make_partition(data, labels=labels, params=params),
        u=AuxiliaryU(v=v),
        params=NggpParams(a=a, sigma=config.sigma, tau=config.tau),
        base=base,
        hyper=sampler.hyper,
    )
    if config.sampler == "slice":
        refresh_atoms(state, rng)

    rows = []
    for _ in range(config.iterations):
        for _ in range(config.thin):
            state = sweep(state, data, rng)
            redraw_data(state, data, rng, sampled)
        rows.append(
            _statistics(
                state.partition.num_clusters, state.u.v, state.params.a, data, state.base
            )
        )
    return np.array(rows)


def redraw_data(
    state: ChainState, data: np.ndarray, rng: np.random.Generator, sampled: bool
) -> None:
    """Replace the data in place by a draw given the rest of the state.

    Chains without cluster parameters draw fresh components from mu0, which
    integrates them out.
    """
    partition = state.partition
    labels = partition.canonical_labels()
    if sampled:
        order = {}
        for label in partition.labels.tolist():
            order.setdefault(label, len(order))
        components = [None] * len(order)
        for cid, j in order.items():
            components[j] = partition.param(cid)
    else:
        components = [
            sample_component_prior(state.base, rng) for _ in range(partition.num_clusters)
        ]
    data[:] = draw_data(labels, components, rng)
    partition.rebuild_stats()


def geweke_z_scores(marginal: np.ndarray, successive: np.ndarray) -> Dict[str, float]:
    """z-score per statistic; the successive side uses its effective sample size."""
    scores = {}
    for j, name in enumerate(GEWEKE_STATISTICS):
        m, s = marginal[:, j], successive[:, j]
        variance = m.var(ddof=1) / m.size + s.var(ddof=1) / ess(s)
        diff = m.mean() - s.mean()
        if variance == 0.0:
            scores[name] = 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        else:
            scores[name] = float(diff / math.sqrt(variance))
    return scores


def geweke_test(
    config: GewekeConfig,
    rng: np.random.Generator,
    sweep: Optional[Sweep] = None,
) -> Dict[str, float]:
    """Compare marginal-conditional and successive-conditional simulation.

    Args:
        config: Sampler, number of observations, iterations and fixed parameters
        rng: Random generator
        sweep: Sweep operator to test (defaults to the configured sampler's)

    Returns:
        z-score per statistic in GEWEKE_STATISTICS
    """
    logger.info(f"Geweke test for {config.sampler}: n={config.n}, iterations={config.iterations}")
    marginal = marginal_conditional_statistics(config, rng)
    successive = successive_conditional_statistics(config, rng, sweep)
    scores = geweke_z_scores(marginal, successive)
    logger.debug(f"Geweke z-scores for {config.sampler}: {scores}")
    return scores


def skip_u_update(sweep: Sweep) -> Sweep:
    """A deliberately broken sweep that leaves U at its previous value."""

    def broken(state: ChainState, data: np.ndarray, rng: np.random.Generator) -> ChainState:
        u = state.u
        state = sweep(state, data, rng)
        state.u = u
        return state

    return broken
