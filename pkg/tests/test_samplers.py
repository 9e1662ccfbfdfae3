"""Tests for the sweep operators, hyperparameter updates and prior simulation."""

import math
import warnings

import numpy as np
import pytest
from scipy import integrate, special

from nggp_mix.core.diagnostics import ess
from nggp_mix.core.errors import ConfigurationError, TruncationWarning
from nggp_mix.core.kernels import (
    ConjugateNormalBase,
    GaussianComponent,
    NonconjugateGaussianBase,
    build_weakly_informative,
    log_prior_predictive,
    sample_component_prior,
)
from nggp_mix.core.nggp import (
    expected_atom_count,
    log_cond_density_v,
    log_eppf,
    psi,
    small_mass_fraction,
)
from nggp_mix.core.oracle import enumerate_partitions
from nggp_mix.core.partition import DetachReceipt
from nggp_mix.core.samplers import (
    ReuseSnapshot,
    adaptive_thinning,
    binned_thinning,
    cluster_count_histogram,
    init_chain_state,
    make_partition,
    make_sweep,
    prior_partition_simulate,
    propose_reuse_move,
    reuse_log_acceptance_ratio,
    sweep_conjugate_marginal,
    sweep_neal8,
    sweep_reuse,
    sweep_slice,
    truncation_threshold,
    update_a,
    update_sigma,
    update_u,
)
from nggp_mix.core.samplers.hyper import sigma_log_conditional, slice_sample
from nggp_mix.core.samplers.neal8 import draw_temporaries, log_temporary_mass, neal8_log_weights
from nggp_mix.core.samplers.prior import NEGLECTED_MASS, dust_mass
from nggp_mix.core.samplers.slice import draw_fixed_masses, refresh_atoms
from nggp_mix.core.samplers.thinning import (
    envelope_integral,
    envelope_inverse,
    log_envelope,
    log_envelope_total,
    log_levy_density,
)
from nggp_mix.types import AuxiliaryU, HyperpriorConfig, NggpParams, PartitionShape


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def two_groups(rng):
    """Two well separated univariate groups of 20 observations."""
    return np.concatenate([rng.normal(-5.0, 0.5, 20), rng.normal(5.0, 0.5, 20)])[:, None]


@pytest.fixture
def planar(rng):
    centers = np.array([[-3.0, 0.0], [3.0, 1.0]])
    return np.vstack([c + 0.5 * rng.normal(size=(15, 2)) for c in centers])


def new_state(data, rng, sampled, conjugate=False, sigma=0.3, hyper=None, **kwargs):
    base = build_weakly_informative(data, conjugate=conjugate)
    return init_chain_state(
        data,
        NggpParams(a=1.0, sigma=sigma, tau=1.0),
        base,
        hyper or HyperpriorConfig(),
        rng,
        sampled=sampled,
        **kwargs,
    )


def assert_close_mc(draws, expected, k=5.0):
    """Mean of correlated draws within k standard errors (ESS-based) of ``expected``."""
    draws = np.asarray(draws, dtype=float)
    se = draws.std() / math.sqrt(ess(draws))
    assert abs(draws.mean() - expected) < k * se


class TestAdaptiveThinning:
    p = NggpParams(a=1.0, sigma=0.5, tau=1.0)

    def test_envelope_inverse(self):
        t, u = 0.05, 0.7
        for x in (0.05, 0.06, 0.5, 3.0):
            r = envelope_integral(x, t, u, self.p)
            assert envelope_inverse(r, t, u, self.p) == pytest.approx(x, rel=1e-10)
        assert envelope_integral(math.inf, t, u, self.p) == pytest.approx(
            math.exp(log_envelope_total(t, u, self.p))
        )

    def test_envelope_dominates(self):
        t, u = 0.02, 1.5
        s = t * np.exp(np.linspace(0.0, 8.0, 400))
        gap = log_envelope(s, t, u, self.p) - log_levy_density(s, u, self.p)
        assert np.all(gap >= -1e-12)
        assert gap[0] == pytest.approx(0.0, abs=1e-12)

    def test_jumps_above_threshold_and_sorted(self, rng):
        masses = adaptive_thinning(0.01, AuxiliaryU(v=0.0), self.p, rng)
        assert masses.size > 0
        assert np.all(masses >= 0.01)
        assert np.all(np.diff(masses) > 0)

    def test_count_is_poisson_with_tail_rate(self, rng):
        threshold, u = 0.01, 1.0
        counts = np.array(
            [adaptive_thinning(threshold, u, self.p, rng).size for _ in range(5000)], dtype=float
        )
        rate = expected_atom_count(threshold, u, self.p)
        assert abs(counts.mean() - rate) < 4 * math.sqrt(rate / counts.size)
        assert 0.85 < counts.var(ddof=1) / counts.mean() < 1.15

    def test_cap_keeps_largest(self):
        full = adaptive_thinning(1e-4, 0.0, self.p, np.random.default_rng(5))
        capped = adaptive_thinning(1e-4, 0.0, self.p, np.random.default_rng(5), max_atoms=3)
        assert full.size > 3
        np.testing.assert_array_equal(capped, full[-3:])

    def test_rejects_nonpositive_threshold(self, rng):
        with pytest.raises(ValueError):
            adaptive_thinning(0.0, 1.0, self.p, rng)


class TestBinnedThinning:
    p = NggpParams(a=1.0, sigma=0.5, tau=1.0)

    @pytest.mark.parametrize("threshold, u", [(0.01, 1.0), (1e-6, 0.0), (2.0, 0.0)])
    def test_count_is_poisson_with_tail_rate(self, rng, threshold, u):
        counts = np.array(
            [binned_thinning(threshold, u, self.p, rng).size for _ in range(5000)], dtype=float
        )
        rate = expected_atom_count(threshold, u, self.p)
        assert abs(counts.mean() - rate) < 4 * math.sqrt(rate / counts.size)
        if rate > 1.0:
            assert 0.85 < counts.var(ddof=1) / counts.mean() < 1.15

    def test_total_mass_matches_intensity(self, rng):
        threshold, u = 1e-3, 0.5
        lam = self.p.tau + u
        sums = np.array([binned_thinning(threshold, u, self.p, rng).sum() for _ in range(5000)])
        # integral of s v(s) over [S, inf) is a lam^(sigma-1) Q(1-sigma, lam S)
        sigma = self.p.sigma
        exact = lam ** (sigma - 1.0) * special.gammaincc(1.0 - sigma, lam * threshold)
        assert abs(sums.mean() - exact) < 4 * sums.std() / math.sqrt(sums.size)

    def test_agrees_with_sequential_thinning(self, rng):
        threshold, u = 0.05, 0.3
        sequential = np.concatenate(
            [adaptive_thinning(threshold, u, self.p, rng) for _ in range(3000)]
        )
        binned = np.concatenate([binned_thinning(threshold, u, self.p, rng) for _ in range(3000)])
        logs = np.log(sequential), np.log(binned)
        se = math.sqrt(logs[0].var() / logs[0].size + logs[1].var() / logs[1].size)
        assert abs(logs[0].mean() - logs[1].mean()) < 4 * se

    def test_sorted_above_threshold(self, rng):
        masses = binned_thinning(1e-4, 0.0, self.p, rng)
        assert masses.size > 10
        assert np.all(masses >= 1e-4)
        assert np.all(np.diff(masses) >= 0)

    def test_cap_keeps_largest(self, rng):
        masses = binned_thinning(1e-8, 0.0, self.p, rng, max_atoms=5)
        assert masses.size == 5
        assert np.all(np.diff(masses) >= 0)
        # about 34 atoms are expected above 1e-3
        assert masses[0] > 1e-3

    def test_rejects_nonpositive_threshold(self, rng):
        with pytest.raises(ValueError):
            binned_thinning(-1.0, 0.0, self.p, rng)


class TestHyperparameters:
    def test_a_is_gamma_when_u_vanishes(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False, conjugate=True)
        state.u = AuxiliaryU(v=-50.0)
        draws = []
        for _ in range(20_000):
            draws.append(update_a(state, rng).params.a)
        # Gamma(alpha_a + |pi|, beta_a) with one cluster and unit hyperparameters
        assert abs(np.mean(draws) - 2.0) < 4 * math.sqrt(2.0 / len(draws))

    def test_a_rate_includes_psi(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False, conjugate=True, sigma=0.5)
        state.u = AuxiliaryU(v=1.0)
        rate = 1.0 + float(psi(math.e, NggpParams(a=1.0, sigma=0.5, tau=1.0)))
        draws = np.array([update_a(state, rng).params.a for _ in range(20_000)])
        assert abs(draws.mean() - 2.0 / rate) < 4 * math.sqrt(2.0 / rate**2 / draws.size)

    def test_a_fixed_when_not_inferred(self, two_groups, rng):
        hyper = HyperpriorConfig(infer_a=False)
        state = new_state(two_groups, rng, sampled=False, conjugate=True, hyper=hyper)
        assert update_a(state, rng).params.a == 1.0

    def test_u_targets_its_conditional(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False, conjugate=True)
        shape, p = state.partition.shape(), state.params
        grid = np.linspace(-15.0, 15.0, 30_001)
        log_dens = log_cond_density_v(grid, shape, p)
        weights = np.exp(log_dens - log_dens.max())
        exact = float((grid * weights).sum() / weights.sum())

        draws = [update_u(state, rng).u.v for _ in range(20_000)]
        assert_close_mc(draws, exact)
        assert 0.0 < state.acceptance.rates()["u"] < 1.0

    def test_sigma_targets_its_conditional(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False, conjugate=True)
        shape, u, p = state.partition.shape(), state.u.u, state.params

        def density(s):
            return math.exp(sigma_log_conditional(s, shape, u, p, 1.0, 2.0))

        norm, _ = integrate.quad(density, 0.0, 1.0)
        first, _ = integrate.quad(lambda s: s * density(s), 0.0, 1.0)

        draws = [update_sigma(state, rng).params.sigma for _ in range(5000)]
        assert all(0.0 < s < 1.0 for s in draws)
        assert_close_mc(draws, first / norm)

    def test_sigma_with_prior_concentrated_near_one(self, two_groups, rng):
        hyper = HyperpriorConfig(alpha_sigma=200.0, beta_sigma=1.0)
        state = new_state(two_groups, rng, sampled=False, conjugate=True, hyper=hyper)
        shape, u, p = state.partition.shape(), state.u.u, state.params
        peak = sigma_log_conditional(0.99, shape, u, p, 200.0, 1.0)

        def density(s):
            return math.exp(sigma_log_conditional(s, shape, u, p, 200.0, 1.0) - peak)

        norm, _ = integrate.quad(density, 0.5, 1.0, points=[0.95, 0.99], limit=200)
        first, _ = integrate.quad(
            lambda s: s * density(s), 0.5, 1.0, points=[0.95, 0.99], limit=200
        )

        draws = [update_sigma(state, rng).params.sigma for _ in range(5000)]
        assert all(0.9 < s < 1.0 for s in draws)
        assert_close_mc(draws, first / norm)

    def test_dp_keeps_sigma_at_zero(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False, conjugate=True, sigma=0.0)
        for _ in range(10):
            assert update_sigma(state, rng).params.sigma == 0.0

    def test_slice_sample_standard_normal(self, rng):
        x, draws = 0.0, []
        for _ in range(20_000):
            x = slice_sample(x, lambda z: -0.5 * z * z, rng, width=1.0)
            draws.append(x)
        draws = np.array(draws)
        assert abs(draws.mean()) < 0.08
        assert 0.9 < draws.var() < 1.1

    def test_slice_sample_respects_bounds(self, rng):
        x = 0.5
        for _ in range(2000):
            x = slice_sample(x, lambda z: math.log(z) + math.log1p(-z), rng, 0.1, 0.0, 1.0)
            assert 0.0 < x < 1.0


class TestConjugateMarginal:
    def test_finds_both_groups(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False, conjugate=True)
        for _ in range(100):
            state = sweep_conjugate_marginal(state, two_groups, rng)
            state.partition.check_invariants()
        labels = state.partition.labels
        assert state.partition.num_clusters >= 2
        assert not set(labels[:20].tolist()) & set(labels[20:].tolist())

    def test_needs_conjugate_base(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False)
        with pytest.raises(ConfigurationError):
            sweep_conjugate_marginal(state, two_groups, rng)

    def test_random_scan_visits_everyone(self, two_groups, rng):
        state = new_state(two_groups, rng, sampled=False, conjugate=True, random_scan=True)
        order = list(state.visit_order(rng))
        assert sorted(order) == list(range(two_groups.shape[0]))


class TestNeal8:
    def test_rejects_empty_temporaries(self, planar, rng):
        state = new_state(planar, rng, sampled=True)
        with pytest.raises(ValueError):
            sweep_neal8(state, planar, rng, C=0)

    @pytest.mark.parametrize("C", [1, 3])
    def test_sweeps_keep_state_consistent(self, planar, rng, C):
        state = new_state(planar, rng, sampled=True)
        for _ in range(30):
            state = sweep_neal8(state, planar, rng, C=C)
            state.partition.check_invariants()
            assert all(isinstance(x, GaussianComponent) for x in state.partition.params())
        assert 2 <= state.partition.num_clusters <= planar.shape[0]

    def test_single_temporary_keeps_detached_singleton(self, rng):
        base = ConjugateNormalBase(m0=0.0, S0=1.0, alpha0=4.0, Sigma0=1.0, beta0=1.0, gamma0=1.0)
        own = GaussianComponent([2.0], [[0.5]])
        receipt = DetachReceipt(cluster_id=3, emptied=True, param=own)
        before = rng.bit_generator.state
        temporaries = draw_temporaries(receipt, base, 1, rng)
        assert len(temporaries) == 1 and temporaries[0] is own
        assert rng.bit_generator.state == before

        temporaries = draw_temporaries(receipt, base, 4, rng)
        assert temporaries[0] is own and len(temporaries) == 4

    def test_fresh_temporaries_when_cluster_survives(self, rng):
        base = ConjugateNormalBase(m0=0.0, S0=1.0, alpha0=4.0, Sigma0=1.0, beta0=1.0, gamma0=1.0)
        receipt = DetachReceipt(cluster_id=0, emptied=False)
        temporaries = draw_temporaries(receipt, base, 3, rng)
        assert len(temporaries) == 3
        assert all(isinstance(x, GaussianComponent) for x in temporaries)

    def test_new_cluster_mass_matches_prior_predictive(self, rng):
        base = ConjugateNormalBase(m0=0.0, S0=1.0, alpha0=4.0, Sigma0=1.0, beta0=1.0, gamma0=1.0)
        p = NggpParams(a=1.5, sigma=0.4, tau=1.0)
        u, C, y = 2.0, 5, np.array([0.3])
        data = np.array([[0.0], [1.0]])
        partition = make_partition(
            data, labels=np.array([0, 0]), params={0: GaussianComponent([0.0], [[1.0]])}
        )
        receipt = DetachReceipt(cluster_id=0, emptied=False)
        log_new = log_temporary_mass(u, p, C)

        masses = np.empty(20_000)
        for r in range(masses.size):
            temporaries = draw_temporaries(receipt, base, C, rng)
            log_w = neal8_log_weights(partition, y, temporaries, log_new, p.sigma)
            assert log_w[0] == pytest.approx(
                math.log(2.0 - p.sigma) - 0.5 * math.log(2 * math.pi) - 0.045
            )
            masses[r] = np.exp(log_w[1:]).sum()

        exact = p.a * (u + p.tau) ** p.sigma * math.exp(float(log_prior_predictive(0.3, base)))
        assert abs(masses.mean() - exact) < 4 * masses.std() / math.sqrt(masses.size)


class TestReuse:
    def test_pool_is_refilled(self, planar, rng):
        state = new_state(planar, rng, sampled=True)
        for _ in range(20):
            state = sweep_reuse(state, planar, rng, C=3)
            state.partition.check_invariants()
            assert len(state.empty_pool) == 3
        assert 2 <= state.partition.num_clusters <= planar.shape[0]

    def test_acceptance_ratio_is_one_for_every_move(self, rng):
        data = rng.normal(size=(6, 1))
        base = build_weakly_informative(data)

        def component():
            return GaussianComponent([rng.normal()], [[rng.uniform(0.5, 2.0)]])

        snapshot = ReuseSnapshot(
            labels=np.array([0, 0, 1, 2, 2, 3]),
            components={label: component() for label in range(4)},
            pool=[component() for _ in range(3)],
        )
        p = NggpParams(a=1.5, sigma=0.4, tau=1.0)
        moves = set()
        for _ in range(1000):
            i = int(rng.integers(6))
            proposal = propose_reuse_move(snapshot, i, data, 0.8, p, base, rng)
            moves.add(proposal.move)
            ratio = reuse_log_acceptance_ratio(snapshot, proposal, data, 0.8, p, base)
            assert ratio == pytest.approx(0.0, abs=1e-8)
        assert moves == {"c=>c'", "c=>k'", "k=>c'", "k=>k'"}

    def test_acceptance_ratio_with_prior_components(self, rng):
        data = rng.normal(size=(8, 2))
        base = build_weakly_informative(data)
        labels = np.array([0, 1, 1, 2, 0, 3, 3, 4])
        snapshot = ReuseSnapshot(
            labels=labels,
            components={label: sample_component_prior(base, rng) for label in range(5)},
            pool=[sample_component_prior(base, rng) for _ in range(2)],
        )
        p = NggpParams(a=0.7, sigma=0.6, tau=2.0)
        for _ in range(200):
            i = int(rng.integers(8))
            proposal = propose_reuse_move(snapshot, i, data, 2.5, p, base, rng)
            ratio = reuse_log_acceptance_ratio(snapshot, proposal, data, 2.5, p, base)
            assert ratio == pytest.approx(0.0, abs=1e-8)
        np.testing.assert_array_equal(snapshot.labels, labels)


class TestSlice:
    def test_every_label_is_reachable(self, planar, rng):
        state = new_state(planar, rng, sampled=True, max_atoms=10_000)
        for _ in range(20):
            state = sweep_slice(state, planar, rng)
            partition, atoms = state.partition, state.atoms
            partition.check_invariants()
            for i in range(partition.n):
                assert 0.0 < state.slices[i] <= atoms.fixed_masses[partition.label_of(i)]
            scale = 1.0 / (state.u.u + state.params.tau)
            floor = max(float(state.slices.min()), state.atom_floor * scale)
            assert np.all(atoms.random_masses >= floor)
            assert atoms.num_random <= state.max_atoms
            assert atoms.random_means.shape == (atoms.num_random, 2)

    def test_atoms_follow_mass_scale_at_large_u(self, planar, rng):
        state = new_state(planar, rng, sampled=True)
        state.u = AuxiliaryU(v=20.0)
        refresh_atoms(state, rng)
        masses = state.atoms.random_masses
        # every mass is of order 1 / U, far below the floor's absolute value
        assert masses.size > 0
        assert masses.min() < state.atom_floor
        assert np.all(masses >= state.slices.min())

    def test_fixed_masses_are_gamma(self, planar, rng):
        data = planar[:5]
        state = new_state(data, rng, sampled=True)
        rate = state.u.u + state.params.tau
        draws = np.array(
            [next(iter(draw_fixed_masses(state, rng).values())) for _ in range(20_000)]
        )
        shape = 5 - state.params.sigma
        assert abs(draws.mean() - shape / rate) < 4 * math.sqrt(shape / rate**2 / draws.size)


class TestMakeSweep:
    def test_known_samplers(self):
        for name in ("marg-conj", "neal8", "reuse", "slice"):
            assert callable(make_sweep(name, C=3))

    def test_unknown_sampler(self):
        with pytest.raises(ValueError):
            make_sweep("gibbs")


class TestPriorSimulation:
    def test_dp_pair_shares_cluster_half_the_time(self, rng):
        p = NggpParams(a=1.0, sigma=0.0, tau=1.0)
        counts = cluster_count_histogram(2, p, 4000, rng)
        assert counts.sum() == 4000
        assert abs(counts[1] / 4000 - 0.5) < 4 * math.sqrt(0.25 / 4000)

    def test_matches_eppf(self, rng):
        p = NggpParams(a=1.0, sigma=0.25, tau=1.0)
        exact = np.zeros(4)
        for shape in enumerate_partitions(3).shapes():
            exact[shape.num_clusters] += math.exp(log_eppf(shape, p))

        threshold = truncation_threshold(p, 1_000_000)
        reps = 2000
        observed = np.zeros(4)
        for _ in range(reps):
            observed[prior_partition_simulate(3, p, rng, threshold=threshold).num_clusters] += 1
        for k in (1, 2, 3):
            se = math.sqrt(exact[k] * (1 - exact[k]) / reps)
            assert abs(observed[k] / reps - exact[k]) < 4 * se

    def test_more_mass_means_more_clusters(self, rng):
        means = []
        for a in (0.1, 1.0, 10.0):
            p = NggpParams(a=a, sigma=0.3, tau=1.0)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TruncationWarning)
                counts = cluster_count_histogram(50, p, 100, rng, max_atoms=2000)
            means.append(float((np.arange(counts.size) * counts).sum() / counts.sum()))
        assert means[0] < means[1] < means[2]

    def test_atom_cap_raises_threshold(self):
        p = NggpParams(a=1.0, sigma=0.5, tau=1.0)
        with pytest.warns(TruncationWarning):
            threshold, fraction = truncation_threshold(p, max_atoms=100)
        assert expected_atom_count(threshold, 0.0, p) <= 100.0 * (1 + 1e-9)
        assert fraction > 1e-6

    def test_no_warning_within_cap(self):
        p = NggpParams(a=1.0, sigma=0.25, tau=1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error", TruncationWarning)
            _, fraction = truncation_threshold(p, max_atoms=1_000_000)
        assert fraction == pytest.approx(NEGLECTED_MASS, rel=1e-6)

    @pytest.mark.parametrize("sigma", [0.0, 0.3, 0.5])
    def test_threshold_meets_neglected_mass_target(self, sigma):
        p = NggpParams(a=1.0, sigma=sigma, tau=2.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error", TruncationWarning)
            threshold, fraction = truncation_threshold(p)
        assert small_mass_fraction(threshold, p) == pytest.approx(1e-6, rel=1e-6)
        assert fraction == pytest.approx(1e-6, rel=1e-6)

    def test_custom_neglected_mass(self):
        p = NggpParams(a=1.0, sigma=0.3, tau=1.0)
        threshold, fraction = truncation_threshold(p, neglected=1e-3)
        assert small_mass_fraction(threshold, p) == pytest.approx(1e-3, rel=1e-6)
        assert threshold > truncation_threshold(p)[0]
        with pytest.raises(ValueError):
            truncation_threshold(p, neglected=0.0)

    def test_dust_share_of_simulated_mass(self, rng):
        p = NggpParams(a=1.0, sigma=0.5, tau=1.0)
        threshold, fraction = truncation_threshold(p)
        masses = binned_thinning(threshold, 0.0, p, rng)
        rate = expected_atom_count(threshold, 0.0, p)
        assert abs(masses.size - rate) < 5 * math.sqrt(rate)
        dust = dust_mass(fraction, p)
        assert dust / (masses.sum() + dust) < 1e-4

    def test_default_cap_bounds_dust_at_high_sigma(self):
        p = NggpParams(a=1.0, sigma=0.7, tau=1.0)
        with pytest.warns(TruncationWarning):
            _, fraction = truncation_threshold(p)
        with pytest.warns(TruncationWarning):
            _, small_cap_fraction = truncation_threshold(p, max_atoms=1_000_000)
        assert fraction < 1e-3 < small_cap_fraction

    def test_dust_observations_are_singletons(self, rng):
        p = NggpParams(a=1.0, sigma=0.7, tau=1.0)
        with pytest.warns(TruncationWarning):
            threshold = truncation_threshold(p, max_atoms=1)
        shape = prior_partition_simulate(2000, p, rng, threshold=threshold)
        assert shape.n == 2000
        # a threshold this high leaves most of the mass as dust
        assert shape.sizes.count(1) > 300

    def test_returns_shape_of_n(self, rng):
        shape = prior_partition_simulate(25, NggpParams(a=2.0, sigma=0.2, tau=1.0), rng)
        assert isinstance(shape, PartitionShape) and shape.n == 25

    def test_rejects_empty_sample(self, rng):
        with pytest.raises(ValueError):
            prior_partition_simulate(0, NggpParams(a=1.0, sigma=0.2, tau=1.0), rng)


def test_one_dimensional_nonconjugate_base_is_used_for_slice(rng):
    base = NonconjugateGaussianBase(
        m0=[0.0], S0=[[1.0]], alpha0=4.0, Sigma0=[[1.0]], beta0=4.0, gamma0=0.25
    )
    data = rng.normal(size=(10, 1))
    state = init_chain_state(
        data, NggpParams(a=1.0, sigma=0.3, tau=1.0), base, HyperpriorConfig(), rng, sampled=True
    )
    for _ in range(5):
        state = sweep_slice(state, data, rng)
    assert state.base.Sigma0.shape == (1, 1)


@pytest.mark.slow
@pytest.mark.parametrize("sigma, reps", [(0.3, 2000), (0.5, 1000), (0.7, 500)])
def test_mean_cluster_count_grows_as_power_of_n(sigma, reps):
    p = NggpParams(a=1.0, sigma=sigma, tau=1.0)
    rng = np.random.default_rng(31)
    ns = np.array([100, 1000, 10_000])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        threshold = truncation_threshold(p, max_atoms=200_000)
    means = [
        np.mean(
            [
                prior_partition_simulate(int(n), p, rng, threshold=threshold).num_clusters
                for _ in range(reps)
            ]
        )
        for n in ns
    ]
    slope = np.polyfit(np.log(ns), np.log(means), 1)[0]
    assert abs(slope - sigma) < 0.05
