"""Oracle suite run by ``nggp-mix verify``."""

import logging
import math
import time
from typing import Callable, Dict, List, Tuple

import numpy as np

from ..core.nggp import log_dp_eppf, log_eppf, predictive_probabilities
from ..core.oracle import eppf_normalization, geweke_test, levy_tail_rate, skip_u_update
from ..core.samplers import adaptive_thinning, make_sweep
from ..types import (
    AuxiliaryU,
    CheckResult,
    GewekeConfig,
    NggpParams,
    PartitionShape,
    VerifyReport,
)
from .run import make_rng

logger = logging.getLogger(__name__)

GEWEKE_THRESHOLD = 4.0
NEGATIVE_CONTROL_THRESHOLD = 6.0
NORMALIZATION_TOL = 1e-6
SCALING_TOL = 1e-8
DP_LIMIT_TOL = 1e-4

# Per-level settings
LEVELS: Dict[str, Dict] = {
    "quick": {
        "eppf_n": (2, 3, 4, 5),
        "eppf_params": [(1.0, 0.0, 1.0), (0.5, 0.3, 1.0), (5.0, 0.7, 1.0)],
        "thinning_grid": [(0.5, 0.1)],
        "thinning_draws": 5_000,
        "geweke_n": 3,
        "geweke_iterations": 3_000,
    },
    "default": {
        "eppf_n": tuple(range(2, 9)),
        "eppf_params": [
            (a, s, 1.0) for a in (0.5, 1.0, 5.0) for s in (0.0, 0.3, 0.7)
        ],
        "thinning_grid": [(s, t) for s in (0.2, 0.5, 0.8) for t in (0.01, 0.1, 1.0)],
        "thinning_draws": 20_000,
        "geweke_n": 5,
        "geweke_iterations": 20_000,
    },
}

Check = Callable[[Dict, np.random.Generator], CheckResult]


def check_eppf_normalization(settings: Dict, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for n in settings["eppf_n"]:
        for a, sigma, tau in settings["eppf_params"]:
            total = eppf_normalization(n, NggpParams(a=a, sigma=sigma, tau=tau))
            worst = max(worst, abs(total - 1.0))
    return CheckResult(
        name="eppf_normalization",
        passed=worst < NORMALIZATION_TOL,
        value=worst,
        detail=f"max |sum EPPF - 1| over n in {list(settings['eppf_n'])}",
    )


def check_dp_limit(settings: Dict, rng: np.random.Generator) -> CheckResult:
    shape = PartitionShape.from_sizes([3, 1, 2])
    a = 1.5
    dp = NggpParams(a=a, sigma=0.0, tau=1.0)
    expected = np.array([a, 3.0, 1.0, 2.0]) / (a + shape.n)
    exact = all(
        np.array_equal(predictive_probabilities(shape, AuxiliaryU(v=v), dp), expected)
        for v in (-3.0, 0.0, 4.0)
    )
    near = NggpParams(a=a, sigma=1e-6, tau=1.0)
    relative = abs(math.expm1(log_eppf(shape, near) - log_dp_eppf(shape, a)))
    return CheckResult(
        name="dp_limit",
        passed=exact and relative < DP_LIMIT_TOL,
        value=relative,
        detail="predictive weights at sigma=0 equal a/(a+n), |c|/(a+n); sigma=1e-6 EPPF",
    )


def check_scaling_invariance(settings: Dict, rng: np.random.Generator) -> CheckResult:
    shapes = [PartitionShape.from_sizes(s) for s in ([2, 1], [3, 1, 1], [4])]
    worst = 0.0
    for a, sigma, tau in [(1.0, 0.5, 1.0), (2.0, 0.3, 0.5)]:
        p = NggpParams(a=a, sigma=sigma, tau=tau)
        for c in (0.1, 2.0, 10.0):
            scaled = NggpParams(a=a * c**sigma, sigma=sigma, tau=tau / c)
            for shape in shapes:
                gap = log_eppf(shape, scaled) - log_eppf(shape, p)
                worst = max(worst, abs(math.expm1(gap)))
    return CheckResult(
        name="scaling_invariance",
        passed=worst < SCALING_TOL,
        value=worst,
        detail="EPPF under (a, sigma, tau) -> (a c^sigma, sigma, tau/c), c in {0.1, 2, 10}",
    )


def check_thinning_rate(settings: Dict, rng: np.random.Generator) -> CheckResult:
    draws = settings["thinning_draws"]
    failures = []
    worst = 0.0
    for sigma, threshold in settings["thinning_grid"]:
        p = NggpParams(a=1.0, sigma=sigma, tau=1.0)
        u = AuxiliaryU.from_u(1.0)
        counts = np.array([adaptive_thinning(threshold, u, p, rng).size for _ in range(draws)])
        rate = levy_tail_rate(threshold, 1.0, p)
        z = (counts.mean() - rate) / math.sqrt(rate / draws)
        dispersion = counts.var(ddof=1) / counts.mean()
        worst = max(worst, abs(z))
        if abs(z) > 4.0 or not 0.9 <= dispersion <= 1.1:
            failures.append(
                f"sigma={sigma}, S={threshold}: z={z:.2f}, var/mean={dispersion:.3f}"
            )
    return CheckResult(
        name="thinning_rate",
        passed=not failures,
        value=worst,
        detail="; ".join(failures) or "atom counts match the quadrature tail rate",
    )


def _geweke_config(sampler: str, settings: Dict) -> GewekeConfig:
    return GewekeConfig(
        sampler=sampler, n=settings["geweke_n"], iterations=settings["geweke_iterations"]
    )


def _geweke_check(sampler: str) -> Check:
    def check(settings: Dict, rng: np.random.Generator) -> CheckResult:
        scores = geweke_test(_geweke_config(sampler, settings), rng)
        worst = max(abs(z) for z in scores.values())
        return CheckResult(
            name=f"geweke_{sampler}",
            passed=worst < GEWEKE_THRESHOLD,
            value=scores,
            detail=f"max |z| = {worst:.2f}",
        )

    return check


def check_negative_control(settings: Dict, rng: np.random.Generator) -> CheckResult:
    config = _geweke_config("marg-conj", settings)
    scores = geweke_test(config, rng, sweep=skip_u_update(make_sweep("marg-conj")))
    worst = max(abs(z) for z in scores.values())
    return CheckResult(
        name="negative_control",
        passed=worst > NEGATIVE_CONTROL_THRESHOLD,
        value=scores,
        detail=f"sweep without the U update must be detected: max |z| = {worst:.2f}",
    )


CHECKS: List[Tuple[str, Check]] = [
    ("eppf_normalization", check_eppf_normalization),
    ("dp_limit", check_dp_limit),
    ("scaling_invariance", check_scaling_invariance),
    ("thinning_rate", check_thinning_rate),
    ("geweke_marg-conj", _geweke_check("marg-conj")),
    ("geweke_neal8", _geweke_check("neal8")),
    ("geweke_reuse", _geweke_check("reuse")),
    ("geweke_slice", _geweke_check("slice")),
    ("negative_control", check_negative_control),
]


def verify(level: str = "quick", seed: int = 0) -> VerifyReport:
    """Run the oracle suite.

    Args:
        level: 'quick' (small n, fewer Monte Carlo draws) or 'default'
        seed: Seed of the Monte Carlo checks

    Returns:
        VerifyReport; ``report.passed`` is False if any check failed
    """
    if level not in LEVELS:
        raise ValueError(f"Unknown verify level '{level}', expected one of {list(LEVELS)}")
    settings = LEVELS[level]
    seeds = np.random.SeedSequence(seed).spawn(len(CHECKS))
    report = VerifyReport(level=level)
    start = time.perf_counter()
    for (name, check), seed_seq in zip(CHECKS, seeds):
        logger.info(f"Running check {name}")
        try:
            result = check(settings, make_rng(seed_seq))
        except Exception as e:
            logger.error(f"Check {name} raised: {e}", exc_info=True)
            result = CheckResult(name=name, passed=False, detail=f"error: {e}")
        status = "passed" if result.passed else "FAILED"
        logger.info(f"Check {name} {status}: {result.detail}")
        report.checks.append(result)
    report.duration_seconds = time.perf_counter() - start
    return report
