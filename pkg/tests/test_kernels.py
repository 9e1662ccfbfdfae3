"""Tests for the Gaussian kernels and base measures."""

import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import integrate, special

from nggp_mix.core.errors import ConfigurationError
from nggp_mix.core.kernels import (
    ConjugateNormalBase,
    GaussianComponent,
    GaussianStats,
    NonconjugateGaussianBase,
    build_weakly_informative,
    log_likelihood_matrix,
    log_marginal,
    log_predictive,
    log_prior_predictive,
    prior_predictive_density,
    sample_component_posterior,
    sample_component_prior,
    sample_prior_batch,
    sigma0_summary,
    stack_components,
    update_sigma0,
)


@pytest.fixture
def conjugate_base():
    return ConjugateNormalBase(m0=0.0, S0=1.0, alpha0=4.0, Sigma0=1.0, beta0=1.0, gamma0=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(11)


def stats_of(values):
    return GaussianStats.from_data(np.asarray(values, dtype=float).reshape(-1, 1))


class TestConjugateClosedForms:
    def test_empty_cluster_has_unit_marginal(self, conjugate_base):
        assert log_marginal(GaussianStats(1), conjugate_base) == 0.0

    def test_single_point_marginal_is_prior_predictive(self, conjugate_base):
        y = 0.7
        expected = float(log_prior_predictive(y, conjugate_base))
        assert log_marginal(stats_of([y]), conjugate_base) == pytest.approx(expected, abs=1e-12)
        assert log_predictive(y, None, conjugate_base) == pytest.approx(expected, abs=1e-12)

    def test_chain_rule(self, conjugate_base):
        values = [0.3, -1.2, 2.5, 0.9]
        for k in range(1, len(values)):
            gain = log_marginal(stats_of(values[: k + 1]), conjugate_base) - log_marginal(
                stats_of(values[:k]), conjugate_base
            )
            step = log_predictive(values[k], stats_of(values[:k]), conjugate_base)
            assert gain == pytest.approx(step, abs=1e-10)

    @pytest.mark.parametrize("values", [[], [0.5], [1.0, 2.0, 4.0]])
    def test_predictive_integrates_to_one(self, conjugate_base, values):
        stats = stats_of(values) if values else None
        total, _ = integrate.quad(
            lambda y: math.exp(log_predictive(y, stats, conjugate_base)), -math.inf, math.inf
        )
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_prior_predictive_matches_monte_carlo(self, conjugate_base, rng):
        y = np.array([[0.3]])
        means, covs = sample_prior_batch(conjugate_base, 200_000, rng)
        draws = np.exp(log_likelihood_matrix(y, means, covs)[0])
        se = draws.std() / math.sqrt(draws.size)
        expected = math.exp(float(log_prior_predictive(0.3, conjugate_base)))
        assert abs(draws.mean() - expected) < 4 * se


class TestComponents:
    def test_rejects_non_positive_definite(self):
        with pytest.raises(ConfigurationError):
            GaussianComponent(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ConfigurationError):
            GaussianComponent(np.zeros(2), np.eye(3))

    @pytest.mark.parametrize("dim", [1, 3])
    def test_likelihood_matrix_matches_single_pdf(self, rng, dim):
        data = rng.normal(size=(7, dim))
        components = []
        for _ in range(4):
            a = rng.normal(size=(dim, dim))
            components.append(GaussianComponent(rng.normal(size=dim), a @ a.T + np.eye(dim)))
        matrix = log_likelihood_matrix(data, *stack_components(components))
        for j, component in enumerate(components):
            np.testing.assert_allclose(matrix[:, j], component.log_pdf_many(data), rtol=1e-10)
            assert matrix[2, j] == pytest.approx(component.log_pdf(data[2]), rel=1e-10)

    def test_conjugate_posterior_concentrates(self, conjugate_base, rng):
        data = rng.normal(2.0, 0.5, size=2000)
        stats = stats_of(data)
        draws = [sample_component_posterior(stats, conjugate_base, rng) for _ in range(200)]
        assert np.mean([d.mean[0] for d in draws]) == pytest.approx(2.0, abs=0.05)
        assert np.mean([d.cov[0, 0] for d in draws]) == pytest.approx(0.25, abs=0.03)

    def test_nonconjugate_gibbs_concentrates(self, rng):
        truth = np.array([1.0, -2.0])
        data = truth + rng.normal(size=(1000, 2)) @ np.diag([0.5, 1.0])
        base = build_weakly_informative(data)
        stats = GaussianStats.from_data(data)
        component = None
        for _ in range(20):
            component = sample_component_posterior(stats, base, rng, current=component)
        np.testing.assert_allclose(component.mean, truth, atol=0.2)
        np.testing.assert_allclose(np.diag(component.cov), [0.25, 1.0], rtol=0.25)


class TestBaseMeasures:
    def test_weakly_informative_unit_range(self):
        base = build_weakly_informative(np.array([[0.0], [1.0], [0.5]]))
        assert isinstance(base, NonconjugateGaussianBase)
        np.testing.assert_allclose(base.m0, [0.5])
        np.testing.assert_allclose(base.S0, [[0.25]])
        assert base.alpha0 == 4.0
        assert base.beta0 == pytest.approx(0.4)
        np.testing.assert_allclose(base.Sigma0, base.S0 / 25.0)

    def test_weakly_informative_conjugate(self):
        base = build_weakly_informative(np.array([0.0, 4.0]), conjugate=True)
        assert isinstance(base, ConjugateNormalBase)
        assert base.m0 == 2.0 and base.S0 == 4.0
        assert base.kappa0 == pytest.approx(1.0 / 25.0)

    def test_conjugate_needs_one_dimension(self):
        with pytest.raises(ConfigurationError):
            build_weakly_informative(np.eye(2), conjugate=True)

    def test_zero_range_rejected(self):
        with pytest.raises(ConfigurationError, match="zero range"):
            build_weakly_informative(np.array([[1.0, 0.0], [1.0, 2.0]]))

    def test_single_observation_rejected(self):
        with pytest.raises(ConfigurationError):
            build_weakly_informative(np.array([[1.0]]))

    def test_sigma0_hyperprior_mean(self, conjugate_base, rng):
        base = replace(conjugate_base, gamma0=0.2)
        draws = np.array([update_sigma0([], base, rng).Sigma0 for _ in range(50_000)])
        se = draws.std() / math.sqrt(draws.size)
        # Gamma(beta0/2, rate 1/(2 gamma0 S0)) has mean beta0 gamma0 S0
        assert abs(draws.mean() - 0.2) < 4 * se

    def test_sigma0_update_moves_towards_components(self, conjugate_base, rng):
        narrow = [GaussianComponent([0.0], [[0.01]]) for _ in range(20)]
        wide = [GaussianComponent([0.0], [[100.0]]) for _ in range(20)]
        low = np.mean([update_sigma0(narrow, conjugate_base, rng).Sigma0 for _ in range(200)])
        high = np.mean([update_sigma0(wide, conjugate_base, rng).Sigma0 for _ in range(200)])
        assert low < 1.0 < high

    def test_nonconjugate_sigma0_is_positive_definite(self, rng):
        base = build_weakly_informative(rng.normal(size=(20, 2)))
        components = [GaussianComponent(np.zeros(2), np.eye(2)) for _ in range(3)]
        new = update_sigma0(components, base, rng)
        assert new.Sigma0.shape == (2, 2)
        assert np.all(np.linalg.eigvalsh(new.Sigma0) > 0)
        assert sigma0_summary(new) == pytest.approx(math.log(np.linalg.det(new.Sigma0)))


class TestPriorPredictive:
    def test_nonconjugate_integrates_to_one(self, rng):
        base = NonconjugateGaussianBase(
            m0=[0.0], S0=[[1.0]], alpha0=4.0, Sigma0=[[1.0]], beta0=0.4, gamma0=1.0
        )
        grid = np.linspace(-60.0, 60.0, 60_001)
        values = prior_predictive_density(grid[:, None], base, rng)
        assert integrate.trapezoid(values, grid) == pytest.approx(1.0, abs=1e-3)

    def test_nonconjugate_needs_generator(self):
        base = NonconjugateGaussianBase(
            m0=[0.0], S0=[[1.0]], alpha0=4.0, Sigma0=[[1.0]], beta0=0.4, gamma0=1.0
        )
        with pytest.raises(ValueError):
            prior_predictive_density(np.zeros((1, 1)), base)



class TestPriorAndPosteriorDraws:
    nonconjugate = NonconjugateGaussianBase(
        m0=[1.0, -2.0], S0=np.diag([0.5, 2.0]), alpha0=5.0, Sigma0=np.eye(2), beta0=3.0, gamma0=0.5
    )

    @pytest.mark.parametrize("kind", ["conjugate", "nonconjugate"])
    def test_prior_mean_of_component_mean_is_m0(self, conjugate_base, rng, kind):
        base = conjugate_base if kind == "conjugate" else self.nonconjugate
        means = np.array([sample_component_prior(base, rng).mean for _ in range(20_000)])
        se = means.std(axis=0) / math.sqrt(means.shape[0])
        assert np.all(np.abs(means.mean(axis=0) - np.atleast_1d(base.m0)) < 4 * se)

    @pytest.mark.parametrize("kind", ["conjugate", "nonconjugate"])
    def test_posterior_without_data_is_prior(self, conjugate_base, kind):
        base = conjugate_base if kind == "conjugate" else self.nonconjugate
        first, second = np.random.default_rng(5), np.random.default_rng(5)
        for _ in range(50):
            prior = sample_component_prior(base, first)
            posterior = sample_component_posterior(GaussianStats(base.dim), base, second)
            np.testing.assert_allclose(posterior.mean, prior.mean, rtol=1e-10, atol=1e-12)
            np.testing.assert_allclose(posterior.cov, prior.cov, rtol=1e-10)


class TestSigma0Conditional:
    """Sigma0 from the hyperprior, components given it, then the Gibbs update of Sigma0.

    If the update draws from the exact conditional, the final Sigma0 follows the
    hyperprior again.
    """

    def test_conjugate(self, conjugate_base, rng):
        draws = np.empty(20_000)
        for r in range(draws.size):
            base = update_sigma0([], conjugate_base, rng)
            components = [sample_component_prior(base, rng) for _ in range(3)]
            draws[r] = update_sigma0(components, base, rng).Sigma0
        # hyperprior Gamma(1/2, rate 1/2)
        assert abs(draws.mean() - 1.0) < 4 * draws.std() / math.sqrt(draws.size)
        logs = np.log(draws)
        expected_log = special.digamma(0.5) - math.log(0.5)
        assert abs(logs.mean() - expected_log) < 4 * logs.std() / math.sqrt(draws.size)

    def test_nonconjugate(self, rng):
        template = NonconjugateGaussianBase(
            m0=np.zeros(2), S0=np.eye(2), alpha0=5.0, Sigma0=np.eye(2), beta0=3.0, gamma0=0.5
        )
        traces = np.empty(5000)
        for r in range(traces.size):
            base = update_sigma0([], template, rng)
            components = [sample_component_prior(base, rng) for _ in range(3)]
            traces[r] = np.trace(update_sigma0(components, base, rng).Sigma0)
        # Wishart(beta0, gamma0 S0) has mean trace beta0 * gamma0 * 2
        assert abs(traces.mean() - 3.0) < 4 * traces.std() / math.sqrt(traces.size)
