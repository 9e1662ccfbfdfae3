"""Adaptive thinning for the jumps of the exponentially tilted Levy measure.

The target intensity above S is v(s) = c s^(-1-sigma) e^(-lam s) with
c = a/Gamma(1-sigma) and lam = tau + u. From the current point t the envelope
w_t(s) = c t^(-1-sigma) e^(-lam s), s >= t, dominates v and has the closed-form
integral W_t(x) = c t^(-1-sigma) (e^(-lam t) - e^(-lam x)) / lam.
"""

import logging
import math
from collections import deque
from typing import Optional

import numpy as np

from ...types import AuxiliaryU, NggpParams
from ..nggp import log_levy_constant

logger = logging.getLogger(__name__)

# Exponential and uniform variates drawn per refill
DRAW_BLOCK = 512


def log_levy_density(s, u: float, p: NggpParams):
    """log v(s), elementwise."""
    s = np.asarray(s, dtype=float)
    return log_levy_constant(p) - (1.0 + p.sigma) * np.log(s) - (p.tau + u) * s


def log_envelope(s, t: float, u: float, p: NggpParams):
    """log w_t(s) for s >= t, elementwise."""
    s = np.asarray(s, dtype=float)
    return log_levy_constant(p) - (1.0 + p.sigma) * math.log(t) - (p.tau + u) * s


def log_envelope_total(t: float, u: float, p: NggpParams) -> float:
    """log W_t(infinity)."""
    lam = p.tau + u
    return log_levy_constant(p) - (1.0 + p.sigma) * math.log(t) - lam * t - math.log(lam)


def envelope_integral(x: float, t: float, u: float, p: NggpParams) -> float:
    """W_t(x), the envelope mass on [t, x]."""
    lam = p.tau + u
    return math.exp(log_envelope_total(t, u, p)) * -math.expm1(-lam * (x - t))


def envelope_inverse(r: float, t: float, u: float, p: NggpParams) -> float:
    """W_t^-1(r) for 0 <= r < W_t(infinity)."""
    ratio = r * math.exp(-log_envelope_total(t, u, p))
    return t - math.log1p(-ratio) / (p.tau + u)


def adaptive_thinning(
    threshold: float,
    u,
    p: NggpParams,
    rng: np.random.Generator,
    max_atoms: Optional[int] = None,
) -> np.ndarray:
    """Simulate the jumps above ``threshold`` of a Poisson process with intensity v.

    Starting at t = S, an Exp(1) increment r either exceeds W_t(infinity) (stop)
    or gives the candidate t' = W_t^-1(r), accepted with probability
    v(t')/w_t(t') = (t'/t)^(-1-sigma); t then moves to t' either way.

    Args:
        threshold: S > 0
        u: Auxiliary variable (AuxiliaryU or a nonnegative float; 0 gives the prior)
        p: NGGP parameters
        rng: Random generator
        max_atoms: Keep only the largest this many jumps

    Returns:
        Increasing array of jump sizes, all >= threshold
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    u = u.u if isinstance(u, AuxiliaryU) else float(u)
    lam = p.tau + u
    exponent = -1.0 - p.sigma
    log_c = log_levy_constant(p) - math.log(lam)

    masses: deque = deque(maxlen=max_atoms)
    exponentials = rng.standard_exponential(DRAW_BLOCK)
    uniforms = rng.random(DRAW_BLOCK)
    k = 0
    t = threshold
    total = 0
    while True:
        if k == DRAW_BLOCK:
            exponentials = rng.standard_exponential(DRAW_BLOCK)
            uniforms = rng.random(DRAW_BLOCK)
            k = 0
        r, w = exponentials[k], uniforms[k]
        k += 1

        log_total = log_c + exponent * math.log(t) - lam * t
        log_r = math.log(r)
        if log_r >= log_total:
            break
        t_new = t - math.log1p(-math.exp(log_r - log_total)) / lam
        if w < (t_new / t) ** exponent:
            masses.append(t_new)
            total += 1
        t = t_new

    if max_atoms is not None and total > max_atoms:
        logger.debug(
            f"Atom cap kept the {max_atoms} largest of {total} jumps above {threshold:.3g}"
        )
    return np.fromiter(masses, dtype=float, count=len(masses))


def binned_thinning(
    threshold: float,
    u,
    p: NggpParams,
    rng: np.random.Generator,
    max_atoms: Optional[int] = None,
) -> np.ndarray:
    """Vectorized simulation of the same point process as ``adaptive_thinning``.

    [S, inf) is cut into doubling bins [b, 2b) up to the first b with lam*b >= 1,
    followed by the open bin [b, inf). On each bin the envelope
    c b^(-1-sigma) e^(-lam s) dominates v; its Poisson number of points is drawn
    at once, positions by inverting the truncated exponential, and each point is
    kept with probability (s/b)^(-1-sigma) >= 2^(-1-sigma). Bins are independent,
    so they are filled from the largest down and filling stops once ``max_atoms``
    jumps are held.

    Returns:
        Increasing array of jump sizes, all >= threshold
    """
    if threshold <= 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    u = u.u if isinstance(u, AuxiliaryU) else float(u)
    lam = p.tau + u
    exponent = -1.0 - p.sigma
    log_c = log_levy_constant(p) - math.log(lam)

    num_bounded = max(0, math.ceil(-math.log2(lam * threshold)))
    starts = threshold * np.exp2(np.arange(num_bounded + 1))
    # the last bin is unbounded
    span = np.ones_like(starts)
    span[:-1] = -np.expm1(-lam * starts[:-1])
    means = np.exp(log_c + exponent * np.log(starts) - lam * starts) * span

    blocks = []
    held = 0
    for b, width, mean in zip(starts[::-1], span[::-1], means[::-1]):
        count = rng.poisson(mean)
        if count == 0:
            continue
        candidates = b - np.log1p(-width * rng.random(count)) / lam
        kept = candidates[rng.random(count) < (candidates / b) ** exponent]
        blocks.append(np.sort(kept))
        held += kept.size
        if max_atoms is not None and held >= max_atoms:
            break

    masses = np.concatenate(blocks[::-1]) if blocks else np.empty(0)
    if max_atoms is not None and masses.size > max_atoms:
        logger.debug(f"Atom cap kept the {max_atoms} largest jumps above {threshold:.3g}")
        masses = masses[-max_atoms:]
    return masses
