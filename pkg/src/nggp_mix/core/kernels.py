"""Gaussian mixture kernels and their base distributions.

Two models are provided:

- ``ConjugateNormalBase``: univariate normal kernel with a normal-inverse-gamma
  base measure, Sigma ~ IG(alpha0/2, Sigma0/2) and m | Sigma ~ N(m0, S0*Sigma/Sigma0).
  Cluster marginals and predictives are available in closed form, and the
  component parameters can also be sampled explicitly.
- ``NonconjugateGaussianBase``: multivariate normal kernel with independent
  priors m ~ N(m0, S0) and Sigma ~ IW(alpha0, Sigma0).

Inverse-Wishart IW(nu, Psi) has mean Psi/(nu - D - 1) (the scipy convention).
Sigma0 carries a Wishart(beta0, gamma0*S0) hyperprior, which is conjugate to the
component covariances and in one dimension is a Gamma law on Sigma0.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy import linalg, stats
from scipy.special import gammaln

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

LOG_2PI = math.log(2.0 * math.pi)

# Rao-Blackwellized draws of Sigma per prior predictive evaluation (nonconjugate)
PRIOR_PREDICTIVE_DRAWS = 64


@dataclass
class GaussianStats:
    """Running count, sum and sum of outer products of one cluster's data."""

    dim: int
    count: int = 0
    total: np.ndarray = field(default=None)
    outer: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.total is None:
            self.total = np.zeros(self.dim)
        if self.outer is None:
            self.outer = np.zeros((self.dim, self.dim))

    @classmethod
    def from_data(cls, data: np.ndarray) -> "GaussianStats":
        data = np.atleast_2d(np.asarray(data, dtype=float))
        return cls(
            dim=data.shape[1],
            count=data.shape[0],
            total=data.sum(axis=0),
            outer=data.T @ data,
        )

    def add(self, y: np.ndarray) -> None:
        self.count += 1
        self.total += y
        self.outer += np.outer(y, y)

    def remove(self, y: np.ndarray) -> None:
        self.count -= 1
        self.total -= y
        self.outer -= np.outer(y, y)
        if self.count == 0:
            # drop accumulated round-off
            self.total[:] = 0.0
            self.outer[:] = 0.0

    def copy(self) -> "GaussianStats":
        return GaussianStats(self.dim, self.count, self.total.copy(), self.outer.copy())

    @property
    def mean(self) -> np.ndarray:
        return self.total / max(self.count, 1)

    def scatter(self, center: np.ndarray) -> np.ndarray:
        """Sum of (y - center)(y - center)^T over the cluster."""
        cross = np.outer(self.total, center)
        return self.outer - cross - cross.T + self.count * np.outer(center, center)


@dataclass(frozen=True)
class GaussianComponent:
    """Mean and covariance of one Gaussian mixture component."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape != (mean.size, mean.size):
            raise ConfigurationError(
                f"Covariance shape {cov.shape} does not match mean of size {mean.size}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        # Fails loudly on non positive-definite covariances
        self.chol

    @property
    def dim(self) -> int:
        return self.mean.size

    @cached_property
    def chol(self) -> np.ndarray:
        try:
            return linalg.cholesky(self.cov, lower=True)
        except linalg.LinAlgError as e:
            raise ConfigurationError(f"Covariance is not positive-definite: {e}") from e

    @cached_property
    def half_log_det(self) -> float:
        return float(np.log(np.diag(self.chol)).sum())

    def log_pdf(self, y) -> float:
        """log N(y; mean, cov) for a single observation."""
        if self.dim == 1:
            var = self.cov[0, 0]
            diff = float(np.asarray(y).reshape(-1)[0]) - self.mean[0]
            return -0.5 * (LOG_2PI + math.log(var) + diff * diff / var)
        z = linalg.solve_triangular(self.chol, np.asarray(y) - self.mean, lower=True)
        return float(-0.5 * (self.dim * LOG_2PI + z @ z) - self.half_log_det)

    def log_pdf_many(self, data: np.ndarray) -> np.ndarray:
        """log N(y; mean, cov) for each row of an (n, D) array."""
        data = np.asarray(data, dtype=float).reshape(-1, self.dim)
        z = linalg.solve_triangular(self.chol, (data - self.mean).T, lower=True)
        return -0.5 * (self.dim * LOG_2PI + (z * z).sum(axis=0)) - self.half_log_det


@dataclass(frozen=True)
class ConjugateNormalBase:
    """Normal-inverse-gamma base measure of the univariate conjugate model."""

    m0: float
    S0: float
    alpha0: float
    Sigma0: float
    beta0: float
    gamma0: float

    def __post_init__(self):
        for name in ("S0", "alpha0", "Sigma0", "beta0", "gamma0"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def dim(self) -> int:
        return 1

    @property
    def conjugate(self) -> bool:
        return True

    @property
    def kappa0(self) -> float:
        """Prior precision multiplier of the mean, Sigma0/S0."""
        return self.Sigma0 / self.S0


@dataclass(frozen=True)
class NonconjugateGaussianBase:
    """Independent normal / inverse-Wishart base measure in D dimensions."""

    m0: np.ndarray
    S0: np.ndarray
    alpha0: float
    Sigma0: np.ndarray
    beta0: float
    gamma0: float

    def __post_init__(self):
        m0 = np.atleast_1d(np.asarray(self.m0, dtype=float))
        object.__setattr__(self, "m0", m0)
        object.__setattr__(self, "S0", np.atleast_2d(np.asarray(self.S0, dtype=float)))
        object.__setattr__(self, "Sigma0", np.atleast_2d(np.asarray(self.Sigma0, dtype=float)))
        if self.alpha0 <= self.dim - 1:
            raise ConfigurationError(f"alpha0 must exceed D-1, got {self.alpha0}")
        if self.beta0 <= self.dim - 1 or self.gamma0 <= 0:
            raise ConfigurationError("beta0 must exceed D-1 and gamma0 must be positive")
        self.S0_chol
        self.Sigma0_chol

    @property
    def dim(self) -> int:
        return self.m0.size

    @property
    def conjugate(self) -> bool:
        return False

    @cached_property
    def S0_chol(self) -> np.ndarray:
        return _cholesky(self.S0, "S0")

    @cached_property
    def S0_inv(self) -> np.ndarray:
        return linalg.cho_solve((self.S0_chol, True), np.eye(self.dim))

    @cached_property
    def Sigma0_chol(self) -> np.ndarray:
        return _cholesky(self.Sigma0, "Sigma0")


KernelBase = Union[ConjugateNormalBase, NonconjugateGaussianBase]


def _cholesky(matrix: np.ndarray, name: str) -> np.ndarray:
    try:
        return linalg.cholesky(matrix, lower=True)
    except linalg.LinAlgError as e:
        raise ConfigurationError(f"{name} is not positive-definite: {e}") from e


# -- conjugate closed forms ----------------------------------------------


def _nig_posterior(count, total, outer, base: ConjugateNormalBase):
    """Posterior (kappa_n, m_n, a_n, b_n) of the normal-inverse-gamma prior.

    Vectorized over clusters; count = 0 returns the prior.
    """
    count = np.asarray(count, dtype=float)
    total = np.asarray(total, dtype=float)
    outer = np.asarray(outer, dtype=float)
    kappa0 = base.kappa0
    kappa_n = kappa0 + count
    m_n = (kappa0 * base.m0 + total) / kappa_n
    a_n = 0.5 * base.alpha0 + 0.5 * count
    ybar = total / np.maximum(count, 1.0)
    centered = np.maximum(outer - total * ybar, 0.0)
    shrink = kappa0 * count * (ybar - base.m0) ** 2 / kappa_n
    b_n = 0.5 * (base.Sigma0 + centered + shrink)
    return kappa_n, m_n, a_n, b_n


def _student_t_logpdf(y, df, loc, scale2):
    return (
        gammaln(0.5 * (df + 1.0))
        - gammaln(0.5 * df)
        - 0.5 * np.log(df * math.pi * scale2)
        - 0.5 * (df + 1.0) * np.log1p((y - loc) ** 2 / (df * scale2))
    )


def log_marginal(suffstats: GaussianStats, base: ConjugateNormalBase) -> float:
    """log f(Y_c): marginal likelihood of a cluster's data under the conjugate prior."""
    if suffstats.count == 0:
        return 0.0
    n = suffstats.count
    kappa_n, _, a_n, b_n = _nig_posterior(n, suffstats.total[0], suffstats.outer[0, 0], base)
    a0, b0 = 0.5 * base.alpha0, 0.5 * base.Sigma0
    return float(
        gammaln(a_n)
        - gammaln(a0)
        + a0 * math.log(b0)
        - a_n * math.log(b_n)
        + 0.5 * math.log(base.kappa0 / kappa_n)
        - 0.5 * n * LOG_2PI
    )


def log_predictive(y, suffstats: Optional[GaussianStats], base: ConjugateNormalBase) -> float:
    """log f(y | Y_c), a Student-t density; no cluster gives the prior predictive."""
    if suffstats is None:
        count, total, outer = 0, 0.0, 0.0
    else:
        count, total, outer = suffstats.count, suffstats.total[0], suffstats.outer[0, 0]
    return float(log_predictive_many(y, [count], [total], [outer], base)[0])


def log_predictive_many(y, counts, totals, outers, base: ConjugateNormalBase) -> np.ndarray:
    """log predictive of scalar y for several clusters given their statistics."""
    kappa_n, m_n, a_n, b_n = _nig_posterior(counts, totals, outers, base)
    y = float(np.asarray(y).reshape(-1)[0])
    return _student_t_logpdf(y, 2.0 * a_n, m_n, b_n * (kappa_n + 1.0) / (a_n * kappa_n))


def predictive_density(values, suffstats: GaussianStats, base: ConjugateNormalBase) -> np.ndarray:
    """Posterior predictive density f(y | Y_c) at each value."""
    kappa_n, m_n, a_n, b_n = _nig_posterior(
        suffstats.count, suffstats.total[0], suffstats.outer[0, 0], base
    )
    values = np.asarray(values, dtype=float)
    return np.exp(
        _student_t_logpdf(values, 2.0 * a_n, m_n, b_n * (kappa_n + 1.0) / (a_n * kappa_n))
    )


def log_prior_predictive(values, base: ConjugateNormalBase) -> np.ndarray:
    """log prior predictive (Student-t) of the conjugate model, elementwise."""
    kappa_n, m_n, a_n, b_n = _nig_posterior(0, 0.0, 0.0, base)
    values = np.asarray(values, dtype=float)
    return _student_t_logpdf(values, 2.0 * a_n, m_n, b_n * (kappa_n + 1.0) / (a_n * kappa_n))


def log_likelihood(y, component: GaussianComponent) -> float:
    """log f(y | component)."""
    return component.log_pdf(y)


def stack_components(components: Sequence[GaussianComponent]):
    """Means (M, D) and covariances (M, D, D) of a list of components."""
    means = np.array([c.mean for c in components], dtype=float)
    covs = np.array([c.cov for c in components], dtype=float)
    return means, covs


def log_likelihood_matrix(data: np.ndarray, means: np.ndarray, covs: np.ndarray) -> np.ndarray:
    """log f(y_i | atom_j) for every observation and atom.

    Args:
        data: (n, D) observations
        means: (M, D) atom means
        covs: (M, D, D) atom covariances

    Returns:
        (n, M) array of log densities
    """
    dim = data.shape[1]
    if means.shape[0] == 0:
        return np.empty((data.shape[0], 0))
    if dim == 1:
        var = covs[:, 0, 0]
        diff = data[:, :1] - means[:, 0][None, :]
        return -0.5 * (LOG_2PI + np.log(var)[None, :] + diff * diff / var[None, :])
    chol = np.linalg.cholesky(covs)
    diff = data[None, :, :] - means[:, None, :]
    z = np.linalg.solve(chol, diff.transpose(0, 2, 1))
    half_log_det = np.log(np.diagonal(chol, axis1=1, axis2=2)).sum(axis=1)
    out = -0.5 * (dim * LOG_2PI + (z * z).sum(axis=1)) - half_log_det[:, None]
    return out.T


def sample_prior_batch(base: KernelBase, size: int, rng: np.random.Generator):
    """Draw ``size`` components from mu0 as stacked arrays (means, covs)."""
    dim = base.dim
    if size == 0:
        return np.empty((0, dim)), np.empty((0, dim, dim))
    if isinstance(base, ConjugateNormalBase):
        var = 0.5 * base.Sigma0 / rng.gamma(0.5 * base.alpha0, size=size)
        means = base.m0 + np.sqrt(var / base.kappa0) * rng.standard_normal(size)
        return means[:, None], var[:, None, None]
    if dim == 1:
        covs = (0.5 * base.Sigma0[0, 0] / rng.gamma(0.5 * base.alpha0, size=size))[:, None, None]
    else:
        covs = stats.invwishart.rvs(
            df=base.alpha0, scale=base.Sigma0, size=size, random_state=rng
        ).reshape(size, dim, dim)
    means = base.m0 + rng.standard_normal((size, dim)) @ base.S0_chol.T
    return means, covs


# -- component sampling --------------------------------------------------


def _inv_wishart(df: float, scale: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if scale.shape == (1, 1):
        return np.array([[0.5 * scale[0, 0] / rng.gamma(0.5 * df)]])
    return np.atleast_2d(stats.invwishart.rvs(df=df, scale=scale, random_state=rng))


def _wishart(df: float, scale: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if scale.shape == (1, 1):
        return np.array([[2.0 * scale[0, 0] * rng.gamma(0.5 * df)]])
    return np.atleast_2d(stats.wishart.rvs(df=df, scale=scale, random_state=rng))


def _mvn_from_precision(
    precision: np.ndarray, linear: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Draw from N(precision^-1 linear, precision^-1)."""
    chol = _cholesky(precision, "posterior precision")
    mean = linalg.cho_solve((chol, True), linear)
    z = rng.standard_normal(mean.size)
    return mean + linalg.solve_triangular(chol.T, z, lower=False)


def sample_component_prior(base: KernelBase, rng: np.random.Generator) -> GaussianComponent:
    """Draw component parameters from the base measure mu0."""
    if isinstance(base, ConjugateNormalBase):
        var = 0.5 * base.Sigma0 / rng.gamma(0.5 * base.alpha0)
        mean = base.m0 + math.sqrt(var / base.kappa0) * rng.standard_normal()
        return GaussianComponent(np.array([mean]), np.array([[var]]))

    cov = _inv_wishart(base.alpha0, base.Sigma0, rng)
    mean = base.m0 + base.S0_chol @ rng.standard_normal(base.dim)
    return GaussianComponent(mean, cov)


def sample_component_posterior(
    suffstats: GaussianStats,
    base: KernelBase,
    rng: np.random.Generator,
    current: Optional[GaussianComponent] = None,
) -> GaussianComponent:
    """Update a cluster's parameters given its data.

    The conjugate model draws exactly from the posterior. The nonconjugate model
    runs one Gibbs pass, Sigma | m then m | Sigma, starting at ``current`` (or at
    the data mean), which leaves the cluster posterior invariant. With no data
    both return a draw from the prior.
    """
    if isinstance(base, ConjugateNormalBase):
        kappa_n, m_n, a_n, b_n = _nig_posterior(
            suffstats.count, suffstats.total[0], suffstats.outer[0, 0], base
        )
        var = float(b_n) / rng.gamma(float(a_n))
        mean = float(m_n) + math.sqrt(var / float(kappa_n)) * rng.standard_normal()
        return GaussianComponent(np.array([mean]), np.array([[var]]))

    if current is not None:
        center = current.mean
    elif suffstats.count > 0:
        center = suffstats.mean
    else:
        center = base.m0
    cov = _inv_wishart(
        base.alpha0 + suffstats.count, base.Sigma0 + suffstats.scatter(center), rng
    )
    cov_inv = linalg.cho_solve((_cholesky(cov, "component covariance"), True), np.eye(base.dim))
    precision = base.S0_inv + suffstats.count * cov_inv
    linear = base.S0_inv @ base.m0 + cov_inv @ suffstats.total
    return GaussianComponent(_mvn_from_precision(precision, linear, rng), cov)


def log_prior_density(component: GaussianComponent, base: KernelBase) -> float:
    """log mu0(component) with respect to Lebesgue measure on (mean, cov)."""
    if isinstance(base, ConjugateNormalBase):
        var = float(component.cov[0, 0])
        mean = float(component.mean[0])
        log_var_density = stats.invgamma.logpdf(var, a=0.5 * base.alpha0, scale=0.5 * base.Sigma0)
        log_mean_density = stats.norm.logpdf(mean, loc=base.m0, scale=math.sqrt(var / base.kappa0))
        return float(log_var_density + log_mean_density)

    log_mean_density = stats.multivariate_normal.logpdf(component.mean, mean=base.m0, cov=base.S0)
    if base.dim == 1:
        log_cov_density = stats.invgamma.logpdf(
            component.cov[0, 0], a=0.5 * base.alpha0, scale=0.5 * base.Sigma0[0, 0]
        )
    else:
        log_cov_density = stats.invwishart.logpdf(component.cov, df=base.alpha0, scale=base.Sigma0)
    return float(log_mean_density + log_cov_density)


def update_sigma0(
    components: Sequence[GaussianComponent], base: KernelBase, rng: np.random.Generator
) -> KernelBase:
    """Gibbs draw of Sigma0 given the occupied components.

    Returns:
        A copy of ``base`` carrying the new Sigma0. With no components this is a
        draw from the Wishart(beta0, gamma0*S0) hyperprior.
    """
    k = len(components)
    if isinstance(base, ConjugateNormalBase):
        # Gamma(beta0/2 + K(alpha0+1)/2, rate 1/(2 gamma0 S0) + sum (1 + (m-m0)^2/S0)/(2 Sigma))
        shape = 0.5 * base.beta0 + 0.5 * k * (base.alpha0 + 1.0)
        rate = 0.5 / (base.gamma0 * base.S0)
        for c in components:
            var = float(c.cov[0, 0])
            rate += 0.5 * (1.0 + (float(c.mean[0]) - base.m0) ** 2 / base.S0) / var
        return replace(base, Sigma0=float(rng.gamma(shape) / rate))

    precision = linalg.cho_solve((base.S0_chol, True), np.eye(base.dim)) / base.gamma0
    for c in components:
        precision = precision + linalg.cho_solve((c.chol, True), np.eye(base.dim))
    scale = linalg.inv(precision)
    scale = 0.5 * (scale + scale.T)
    sigma0 = _wishart(base.beta0 + k * base.alpha0, scale, rng)
    return replace(base, Sigma0=sigma0)


def prior_predictive_density(
    points: np.ndarray,
    base: KernelBase,
    rng: Optional[np.random.Generator] = None,
    num_draws: int = PRIOR_PREDICTIVE_DRAWS,
) -> np.ndarray:
    """Prior predictive density integral f(y|x) mu0(dx) at each row of ``points``.

    Closed form (Student-t) for the conjugate model. The nonconjugate model
    integrates the mean analytically, y | Sigma ~ N(m0, S0 + Sigma), and averages
    over ``num_draws`` inverse-Wishart draws of Sigma.
    """
    points = np.asarray(points, dtype=float).reshape(-1, base.dim)
    if isinstance(base, ConjugateNormalBase):
        return np.exp(log_prior_predictive(points[:, 0], base))

    if rng is None:
        raise ValueError("The nonconjugate prior predictive needs a random generator")
    log_dens = np.empty((num_draws, points.shape[0]))
    for j in range(num_draws):
        cov = _inv_wishart(base.alpha0, base.Sigma0, rng)
        log_dens[j] = GaussianComponent(base.m0, base.S0 + cov).log_pdf_many(points)
    return np.exp(log_dens).mean(axis=0)


def build_weakly_informative(data: np.ndarray, conjugate: bool = False) -> KernelBase:
    """Range-based weakly informative base measure for the given data.

    m0 is the per-dimension midpoint of the data range and S0 = diag(s_i^2) with
    s_i the half-range. alpha0 = D+3 and beta0 = D-0.6; gamma0 = 1/(25 beta0)
    so that the prior mean of a component covariance is S0/50. Sigma0 starts at
    its hyperprior mean beta0*gamma0*S0.

    Args:
        data: (n, D) observations, n >= 2
        conjugate: Build the univariate conjugate base (requires D = 1)

    Returns:
        ConjugateNormalBase or NonconjugateGaussianBase
    """
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    n, dim = data.shape
    if n < 2:
        raise ConfigurationError(f"At least two observations are needed, got {n}")
    lo, hi = data.min(axis=0), data.max(axis=0)
    half_range = 0.5 * (hi - lo)
    if np.any(half_range <= 0):
        flat = [int(d) for d in np.flatnonzero(half_range <= 0)]
        raise ConfigurationError(f"Data have zero range in dimension(s) {flat}")

    m0 = 0.5 * (lo + hi)
    S0 = np.diag(half_range**2)
    alpha0 = dim + 3.0
    beta0 = dim - 0.6
    gamma0 = 1.0 / (25.0 * beta0)
    Sigma0 = beta0 * gamma0 * S0
    logger.debug(f"Weakly informative base: m0={m0}, s={half_range}, gamma0={gamma0:.4g}")

    if conjugate:
        if dim != 1:
            raise ConfigurationError(f"The conjugate model is univariate, data have D={dim}")
        return ConjugateNormalBase(
            m0=float(m0[0]),
            S0=float(S0[0, 0]),
            alpha0=alpha0,
            Sigma0=float(Sigma0[0, 0]),
            beta0=beta0,
            gamma0=gamma0,
        )
    return NonconjugateGaussianBase(
        m0=m0, S0=S0, alpha0=alpha0, Sigma0=Sigma0, beta0=beta0, gamma0=gamma0
    )


def sigma0_summary(base: KernelBase) -> float:
    """Scalar summary of Sigma0 for traces: the value in 1-D, log-determinant otherwise."""
    if isinstance(base, ConjugateNormalBase):
        return base.Sigma0
    if base.dim == 1:
        return float(base.Sigma0[0, 0])
    return float(2.0 * np.log(np.diag(base.Sigma0_chol)).sum())


def component_likelihoods(y, components: List[GaussianComponent]) -> np.ndarray:
    """log f(y | x) for each component."""
    return np.array([c.log_pdf(y) for c in components], dtype=float)
