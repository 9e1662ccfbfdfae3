"""Library interface for nggp-mix operations."""

from .load_data import load_csv
from .run import run, run_chain
from .verify import verify
from .prior_sim import prior_histograms, prior_moments

__all__ = [
    "load_csv",
    "run",
    "run_chain",
    "verify",
    "prior_histograms",
    "prior_moments",
]
