"""Tests for run models and environment settings."""

import logging

import pytest
from pydantic import ValidationError

from nggp_mix.types import GewekeConfig, HyperpriorConfig, NggpParams, RunConfig, load_config


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.sampler == "marg-conj"
        assert config.model == "conjugate-1d"
        assert config.num_retained == 10_000
        assert config.nggp_params() == NggpParams(a=1.0, sigma=0.5, tau=1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"C": 0},
            {"thin": 0},
            {"repeats": 0},
            {"iters": 0, "burnin": 0},
            {"seed": 2**64},
            {"seed": -1},
            {"sigma": 1.0},
            {"sampler": "marg-conj", "model": "nonconjugate"},
            {"sampler": "gibbs"},
            {"grid_min": 1.0, "grid_max": 0.0},
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ValidationError):
            RunConfig(**kwargs)

    def test_largest_seed(self):
        assert RunConfig(seed=2**64 - 1).seed == 2**64 - 1

    def test_hyperprior_switches(self):
        hyper = RunConfig(fix_sigma=True, infer_tau=True, alpha_a=3.0).hyperprior()
        assert hyper == HyperpriorConfig(alpha_a=3.0, infer_sigma=False, infer_tau=True)

    def test_nonconjugate_samplers(self):
        for sampler in ("neal8", "reuse", "slice"):
            config = RunConfig(sampler=sampler, model="nonconjugate", C=3)
            assert config.C == 3


class TestGewekeConfig:
    def test_enumeration_limit(self):
        with pytest.raises(ValidationError):
            GewekeConfig(sampler="neal8", n=7)

    def test_minimum_iterations(self):
        with pytest.raises(ValidationError):
            GewekeConfig(sampler="neal8", iterations=10)


class TestNggpParams:
    def test_dp(self):
        assert NggpParams(a=1.0, sigma=0.0, tau=1.0).is_dp
        assert not NggpParams(a=1.0, sigma=0.1, tau=1.0).is_dp

    @pytest.mark.parametrize("kwargs", [{"a": 0.0}, {"sigma": -0.1}, {"tau": 0.0}])
    def test_rejects(self, kwargs):
        values = {"a": 1.0, "sigma": 0.5, "tau": 1.0, **kwargs}
        with pytest.raises(ValidationError):
            NggpParams(**values)


class TestEnvironment:
    def test_defaults(self, monkeypatch):
        for name in (
            "NGGP_MIX_OUTPUT_DIR",
            "NGGP_MIX_MAX_ATOMS",
            "NGGP_MIX_PRIOR_MAX_ATOMS",
            "NGGP_MIX_NEGLECTED_MASS",
            "NGGP_MIX_VERIFY_LEVEL",
        ):
            monkeypatch.delenv(name, raising=False)
        config = load_config()
        assert config.runtime.output_dir == "nggp-mix-output"
        assert config.runtime.max_atoms == 1_000_000
        assert config.runtime.prior_max_atoms == 10_000_000
        assert config.runtime.neglected_mass == 1e-6
        assert config.runtime.verify_level == "quick"

    def test_overrides(self, monkeypatch):
        monkeypatch.setenv("NGGP_MIX_MAX_ATOMS", "500")
        monkeypatch.setenv("NGGP_MIX_ATOM_FLOOR", "1e-6")
        monkeypatch.setenv("LOG_LEVEL", "debug")
        config = load_config()
        assert config.runtime.max_atoms == 500
        assert config.runtime.atom_floor == 1e-6
        assert config.logging.log_level == logging.DEBUG

    @pytest.mark.parametrize(
        "name, value",
        [
            ("NGGP_MIX_MAX_ATOMS", "0"),
            ("NGGP_MIX_MAX_ATOMS", "many"),
            ("NGGP_MIX_ATOM_FLOOR", "-1"),
            ("NGGP_MIX_PRIOR_MAX_ATOMS", "0"),
            ("NGGP_MIX_NEGLECTED_MASS", "1.5"),
            ("NGGP_MIX_VERIFY_LEVEL", "exhaustive"),
            ("LOG_LEVEL", "LOUD"),
        ],
    )
    def test_invalid(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ValueError):
            load_config()
