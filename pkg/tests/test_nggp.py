"""Tests for the NGGP Levy calculus."""

import math

import numpy as np
import pytest
from scipy import integrate, special

from nggp_mix.core.nggp import (
    cond_density_v_mode,
    dp_eppf,
    expected_atom_count,
    log_cond_density_v,
    log_dp_eppf,
    log_eppf,
    log_joint_partition_u,
    log_kappa,
    predictive_probabilities,
    predictive_weights,
    psi,
    small_mass_fraction,
)
from nggp_mix.core.oracle import levy_tail_rate
from nggp_mix.types import AuxiliaryU, NggpParams, PartitionShape


def params(a=1.0, sigma=0.5, tau=1.0) -> NggpParams:
    return NggpParams(a=a, sigma=sigma, tau=tau)


def shape(*sizes) -> PartitionShape:
    return PartitionShape.from_sizes(sizes)


class TestPsi:
    def test_zero_at_origin(self):
        for p in (params(), params(sigma=0.0), params(a=3.0, sigma=0.9, tau=0.2)):
            assert psi(0.0, p) == 0.0

    def test_closed_form(self):
        assert psi(3.0, params()) == pytest.approx(2.0, rel=1e-14)

    def test_dp_branch(self):
        assert psi(math.e - 1.0, params(a=2.0, sigma=0.0)) == pytest.approx(2.0, rel=1e-14)

    def test_small_sigma_approaches_dp(self):
        u = 4.0
        assert psi(u, params(sigma=1e-9)) == pytest.approx(psi(u, params(sigma=0.0)), rel=1e-7)

    def test_increasing_in_u(self):
        grid = np.linspace(0.0, 50.0, 501)
        for p in (params(), params(sigma=0.0), params(sigma=0.9)):
            assert np.all(np.diff(psi(grid, p)) > 0)


class TestLogKappa:
    def test_examples(self):
        assert log_kappa(1, 0.0, params()) == pytest.approx(0.0, abs=1e-14)
        assert log_kappa(2, 0.0, params()) == pytest.approx(math.log(0.5), abs=1e-14)
        assert log_kappa(1, 0.0, params(a=3.0, sigma=0.0)) == pytest.approx(math.log(3.0))

    def test_decreasing_in_u(self):
        grid = np.linspace(0.0, 20.0, 201)
        for m in (1, 3, 10):
            values = [log_kappa(m, u, params(sigma=0.3)) for u in grid]
            assert np.all(np.diff(values) < 0)

    def test_rejects_zero_moment(self):
        with pytest.raises(ValueError):
            log_kappa(0, 1.0, params())


class TestPredictiveWeights:
    def test_hand_example(self):
        probs = predictive_probabilities(shape(2, 1), AuxiliaryU.from_u(1e-300), params())
        # (U + tau)^sigma is 1 to double precision
        np.testing.assert_allclose(probs, [1 / 3, 1 / 2, 1 / 6], rtol=1e-12)

    def test_dp_independent_of_u(self):
        p = params(a=2.5, sigma=0.0)
        s = shape(3, 1, 1)
        expected = np.array([2.5, 3.0, 1.0, 1.0]) / (2.5 + 5)
        for v in (-5.0, 0.0, 5.0):
            np.testing.assert_array_equal(predictive_probabilities(s, AuxiliaryU(v=v), p), expected)

    def test_empty_partition_opens_cluster(self):
        probs = predictive_probabilities(PartitionShape(n=0, sizes=()), 1.0, params())
        np.testing.assert_array_equal(probs, [1.0])

    def test_weights_positive_and_normalized(self):
        new, clusters = predictive_weights(shape(4, 2, 1), 2.0, params(sigma=0.7))
        assert new > 0 and all(w > 0 for w in clusters)
        probs = predictive_probabilities(shape(4, 2, 1), 2.0, params(sigma=0.7))
        assert probs.sum() == pytest.approx(1.0, abs=1e-15)


class TestJointLaw:
    def test_integrates_to_one_over_partitions_of_two(self):
        for p in (params(sigma=0.0), params(a=2.0, sigma=0.4, tau=0.5)):
            total = 0.0
            for s in (shape(2), shape(1, 1)):
                value, _ = integrate.quad(
                    lambda u: math.exp(log_joint_partition_u(s, u, p)), 0.0, math.inf
                )
                total += value
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_dp_pair_probability(self):
        assert math.exp(log_eppf(shape(2), params(sigma=0.0))) == pytest.approx(0.5)

    def test_rejects_nonpositive_u(self):
        with pytest.raises(ValueError):
            log_joint_partition_u(shape(1), 0.0, params())

    def test_conditional_equals_joint_plus_jacobian(self):
        s, p = shape(3, 2), params(a=1.5, sigma=0.3)
        diffs = [
            log_joint_partition_u(s, math.exp(v), p) + v - log_cond_density_v(v, s, p)
            for v in (-2.0, 0.0, 3.0)
        ]
        assert max(diffs) - min(diffs) == pytest.approx(0.0, abs=1e-10)


class TestConditionalOfV:
    def test_log_concave(self):
        v = np.linspace(-10.0, 10.0, 2001)
        s = PartitionShape(n=10, sizes=(5, 3, 2))
        values = log_cond_density_v(v, s, params())
        assert np.all(np.diff(values, 2) <= 1e-9)

    def test_mode_matches_root(self):
        # n=1, one cluster, DP: the mode solves n/u = (n + a)/(u + tau), u = n tau / a
        p = params(a=1.0, sigma=0.0, tau=1.0)
        assert cond_density_v_mode(shape(1), p) == pytest.approx(0.0, abs=1e-8)

    def test_mode_matches_grid_argmax(self):
        s, p = shape(4, 4, 2), params(a=2.0, sigma=0.6)
        grid = np.linspace(-10.0, 10.0, 200_001)
        v_star = cond_density_v_mode(s, p)
        assert v_star == pytest.approx(grid[np.argmax(log_cond_density_v(grid, s, p))], abs=2e-4)

    def test_requires_observations(self):
        with pytest.raises(ValueError):
            log_cond_density_v(0.0, PartitionShape(n=0, sizes=()), params())


class TestEppf:
    def test_dp_examples(self):
        assert dp_eppf(shape(2), 1.0) == pytest.approx(0.5)
        assert dp_eppf(shape(1, 1), 1.0) == pytest.approx(0.5)

    def test_dp_branch_is_crp(self):
        for s in (shape(3, 1), shape(2, 2, 1)):
            assert log_eppf(s, params(a=0.7, sigma=0.0)) == log_dp_eppf(s, 0.7)

    def test_small_sigma_close_to_dp(self):
        s = shape(3, 2, 1)
        gap = log_eppf(s, params(a=1.5, sigma=1e-6)) - log_dp_eppf(s, 1.5)
        assert abs(math.expm1(gap)) < 1e-4

    @pytest.mark.parametrize("c", [0.1, 2.0, 10.0])
    def test_scaling_invariance(self, c):
        a, sigma, tau = 1.3, 0.4, 0.8
        scaled = NggpParams(a=a * c**sigma, sigma=sigma, tau=tau / c)
        for s in (shape(2, 1), shape(3, 1, 1), shape(5)):
            gap = log_eppf(s, scaled) - log_eppf(s, params(a, sigma, tau))
            assert abs(math.expm1(gap)) < 1e-6


class TestAtomCounts:
    @pytest.mark.parametrize("sigma", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("threshold", [0.01, 0.1, 1.0])
    def test_closed_form_matches_quadrature(self, sigma, threshold):
        p = params(a=1.5, sigma=sigma)
        closed = expected_atom_count(threshold, 0.7, p)
        assert closed == pytest.approx(levy_tail_rate(threshold, 0.7, p), rel=1e-6)

    def test_dp_exponential_integral(self):
        p = params(a=2.0, sigma=0.0, tau=1.0)
        assert expected_atom_count(0.3, 1.0, p) == pytest.approx(2.0 * special.exp1(0.6))

    def test_small_mass_fraction_bounds(self):
        p = params()
        assert 0.0 < small_mass_fraction(1e-6, p) < small_mass_fraction(1.0, p) < 1.0
