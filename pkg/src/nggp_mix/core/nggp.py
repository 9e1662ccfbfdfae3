"""Levy calculus of the normalized generalized Gamma process.

All functions are pure. Densities are returned on the log scale; sigma = 0
takes the closed-form Dirichlet process branch rather than a numerical limit.
"""

import logging
import math
from typing import List, Tuple, Union

import numpy as np
from scipy import integrate, optimize, special
from scipy.special import gammaln

from ..types import AuxiliaryU, NggpParams, PartitionShape

logger = logging.getLogger(__name__)

# Half-width (in v = log u) of the quadrature window around the mode
QUAD_HALF_WIDTH = 40.0
QUAD_LIMIT = 400

UArg = Union[AuxiliaryU, float]


def _as_u(u: UArg) -> float:
    return u.u if isinstance(u, AuxiliaryU) else float(u)


def psi(u, p: NggpParams):
    """Laplace exponent psi(u) = (a/sigma)((u+tau)^sigma - tau^sigma).

    Works elementwise on arrays. The DP branch is a*log(1 + u/tau).
    """
    log_ratio = np.log1p(np.asarray(u, dtype=float) / p.tau)
    if p.is_dp:
        return p.a * log_ratio
    # (u+tau)^s - tau^s = tau^s * expm1(s*log(1+u/tau)), stable as s -> 0
    return p.a / p.sigma * p.tau**p.sigma * np.expm1(p.sigma * log_ratio)


def psi_prime(u, p: NggpParams):
    """Derivative of psi, a*(u+tau)^(sigma-1)."""
    return p.a * np.power(np.asarray(u, dtype=float) + p.tau, p.sigma - 1.0)


def log_kappa(m: int, u: float, p: NggpParams) -> float:
    """log of the m-th moment of the exponentially tilted Levy measure."""
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if p.is_dp:
        return math.log(p.a) - m * math.log(u + p.tau) + gammaln(m)
    return (
        math.log(p.a)
        - (m - p.sigma) * math.log(u + p.tau)
        + gammaln(m - p.sigma)
        - gammaln(1.0 - p.sigma)
    )


def predictive_weights(
    shape: PartitionShape, u: UArg, p: NggpParams
) -> Tuple[float, List[float]]:
    """Unnormalized predictive weights for a new cluster and each existing cluster.

    Returns:
        (a(U+tau)^sigma, [|c| - sigma for each cluster]); the DP case
        reduces to (a, [|c|]) independently of U.
    """
    new_weight = p.a * (_as_u(u) + p.tau) ** p.sigma
    return new_weight, [size - p.sigma for size in shape.sizes]


def predictive_probabilities(shape: PartitionShape, u: UArg, p: NggpParams) -> np.ndarray:
    """Normalized predictive probabilities, new cluster first."""
    new_weight, cluster_weights = predictive_weights(shape, u, p)
    weights = np.array([new_weight, *cluster_weights], dtype=float)
    # total = a(U+tau)^sigma + n - sigma*|pi|
    return weights / weights.sum()


def _log_cluster_terms(sizes, sigma: float) -> float:
    sizes = np.asarray(sizes, dtype=float)
    if sizes.size == 0:
        return 0.0
    if sigma == 0.0:
        return float(gammaln(sizes).sum())
    return float((gammaln(sizes - sigma) - gammaln(1.0 - sigma)).sum())


def log_joint_partition_u(shape: PartitionShape, u: float, p: NggpParams) -> float:
    """log joint density of (partition, U) under the NGGP prior."""
    if u <= 0:
        raise ValueError(f"u must be positive, got {u}")
    n, k = shape.n, shape.num_clusters
    return (
        (n - 1) * math.log(u)
        - gammaln(n)
        + k * math.log(p.a)
        - (n - p.sigma * k) * math.log(u + p.tau)
        - float(psi(u, p))
        + _log_cluster_terms(shape.sizes, p.sigma)
    )


def log_cond_density_v(v, shape: PartitionShape, p: NggpParams):
    """Unnormalized log density of V = log U given the partition.

    n*v - (n - sigma*|pi|)*log(e^v + tau) - psi(e^v); elementwise over v.
    """
    if shape.n < 1:
        raise ValueError("log_cond_density_v needs at least one observation")
    v = np.asarray(v, dtype=float)
    n, k = shape.n, shape.num_clusters
    out = n * v - (n - p.sigma * k) * np.logaddexp(v, math.log(p.tau)) - psi(np.exp(v), p)
    return float(out) if out.ndim == 0 else out


def cond_density_v_mode(shape: PartitionShape, p: NggpParams) -> float:
    """Maximizer of log_cond_density_v (unique by log-concavity)."""
    n, k = shape.n, shape.num_clusters

    def slope(v: float) -> float:
        u = math.exp(v)
        return n - (n - p.sigma * k) * u / (u + p.tau) - u * float(psi_prime(u, p))

    lo, hi = -1.0, 1.0
    while slope(lo) < 0:
        lo -= 2.0 * (1.0 + abs(lo))
    while slope(hi) > 0:
        hi += 2.0 * (1.0 + abs(hi))
    return float(optimize.brentq(slope, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=500))


def log_levy_constant(p: NggpParams) -> float:
    """log of a/Gamma(1-sigma), the constant of the Levy density."""
    return math.log(p.a) - float(gammaln(1.0 - p.sigma))


def expected_atom_count(threshold: float, u: float, p: NggpParams) -> float:
    """Mean number of atoms with mass above ``threshold`` under the tilted intensity.

    Closed form a/Gamma(1-sigma) * lam^sigma * Gamma(-sigma, lam*S) with
    lam = tau + u; the DP case is a*E1(lam*S).
    """
    lam = p.tau + u
    x = lam * threshold
    if p.is_dp:
        return p.a * float(special.exp1(x))
    # Gamma(-s, x) = (x^-s e^-x - Gamma(1-s, x)) / s
    upper = math.exp(gammaln(1.0 - p.sigma)) * float(special.gammaincc(1.0 - p.sigma, x))
    upper_neg = (math.exp(-p.sigma * math.log(x) - x) - upper) / p.sigma
    return math.exp(log_levy_constant(p)) * lam**p.sigma * upper_neg


def small_mass_fraction(threshold: float, p: NggpParams) -> float:
    """Expected share of the (untilted by U) total mass carried by atoms below ``threshold``."""
    return float(special.gammainc(1.0 - p.sigma, p.tau * threshold))


def log_dp_eppf(shape: PartitionShape, a: float) -> float:
    """log of the Dirichlet process EPPF (Chinese restaurant process)."""
    n, k = shape.n, shape.num_clusters
    return (
        gammaln(a)
        + k * math.log(a)
        - gammaln(a + n)
        + float(gammaln(np.asarray(shape.sizes, dtype=float)).sum())
    )


def dp_eppf(shape: PartitionShape, a: float) -> float:
    """Dirichlet process EPPF Gamma(a) a^|pi| / Gamma(a+n) * prod Gamma(|c|)."""
    return math.exp(log_dp_eppf(shape, a))


def log_eppf(shape: PartitionShape, p: NggpParams) -> float:
    """log of the marginal NGGP EPPF, integrating U out of the joint law.

    Closed form for sigma = 0; otherwise adaptive quadrature in v = log u
    centred on the mode of the (log-concave) integrand.
    """
    if shape.n == 0:
        return 0.0
    if p.is_dp:
        return log_dp_eppf(shape, p.a)

    v_star = cond_density_v_mode(shape, p)

    # log_joint(e^v) + v, written in v so that tiny u does not underflow
    offset = (
        -gammaln(shape.n)
        + shape.num_clusters * math.log(p.a)
        + _log_cluster_terms(shape.sizes, p.sigma)
    )

    def log_integrand(v: float) -> float:
        return log_cond_density_v(v, shape, p) + offset

    peak = log_integrand(v_star)
    value, abserr = integrate.quad(
        lambda v: math.exp(log_integrand(v) - peak),
        v_star - QUAD_HALF_WIDTH,
        v_star + QUAD_HALF_WIDTH,
        points=[v_star],
        epsabs=0.0,
        epsrel=1e-11,
        limit=QUAD_LIMIT,
    )
    logger.debug(f"EPPF quadrature for sizes={shape.sizes}: {value} (err {abserr})")
    return peak + math.log(value)
