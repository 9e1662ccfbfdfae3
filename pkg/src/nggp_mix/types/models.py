"""Validated input models for nggp-mix."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

ModelName = Literal["conjugate-1d", "nonconjugate"]
SamplerName = Literal["marg-conj", "neal8", "reuse", "slice"]


class NggpParams(BaseModel):
    """Parameters (a, sigma, tau) of a normalized generalized Gamma process.

    sigma = 0 is the Dirichlet process limit.
    """

    model_config = ConfigDict(frozen=True)

    a: float = Field(gt=0.0, description="Mass parameter")
    sigma: float = Field(ge=0.0, lt=1.0, description="Discount (stability) index")
    tau: float = Field(gt=0.0, description="Exponential tilt")

    @property
    def is_dp(self) -> bool:
        """True when the parameters describe a Dirichlet process."""
        return self.sigma == 0.0


class HyperpriorConfig(BaseModel):
    """Priors and update switches for the NGGP hyperparameters and U."""

    model_config = ConfigDict(frozen=True)

    alpha_a: float = Field(1.0, gt=0.0, description="Gamma prior shape for a")
    beta_a: float = Field(1.0, gt=0.0, description="Gamma prior rate for a")
    alpha_sigma: float = Field(1.0, gt=0.0, description="Beta prior first shape for sigma")
    beta_sigma: float = Field(2.0, gt=0.0, description="Beta prior second shape for sigma")
    alpha_tau: float = Field(1.0, gt=0.0, description="Gamma prior shape for tau")
    beta_tau: float = Field(1.0, gt=0.0, description="Gamma prior rate for tau")
    infer_a: bool = True
    infer_sigma: bool = True
    infer_tau: bool = False
    infer_sigma0: bool = True
    u_proposal_sd: float = Field(0.5, gt=0.0, description="MH step for log U")
    tau_proposal_sd: float = Field(0.5, gt=0.0, description="MH step for log tau")
    sigma_slice_width: float = Field(0.1, gt=0.0, le=1.0)


class RunConfig(BaseModel):
    """Configuration of one sampling run."""

    data: Optional[Path] = Field(None, description="CSV file, one observation per row")
    model: ModelName = Field("conjugate-1d", description="Mixture kernel and base measure")
    sampler: SamplerName = Field("marg-conj", description="MCMC algorithm")
    C: int = Field(2, description="Number of empty clusters (neal8, reuse)")
    iters: int = Field(200_000, ge=0, description="Iterations after burn-in")
    burnin: int = Field(10_000, ge=0, description="Burn-in iterations")
    thin: int = Field(20, description="Keep every thin-th iteration")
    seed: int = Field(0, ge=0, lt=2**64, description="Master seed (64-bit unsigned)")
    out: Optional[Path] = Field(None, description="Output directory")
    a: float = Field(1.0, gt=0.0, description="Initial value of a")
    sigma: float = Field(0.5, ge=0.0, lt=1.0, description="Initial (or fixed) sigma")
    tau_fixed: float = Field(1.0, gt=0.0, description="Value of tau (initial value when inferred)")
    infer_tau: bool = Field(False, description="Infer tau with a Gamma prior")
    fix_sigma: bool = Field(False, description="Keep sigma at its initial value")
    alpha_a: float = Field(1.0, gt=0.0, description="Gamma prior shape for a")
    beta_a: float = Field(1.0, gt=0.0, description="Gamma prior rate for a")
    alpha_sigma: float = Field(1.0, gt=0.0, description="Beta prior first shape for sigma")
    beta_sigma: float = Field(2.0, gt=0.0, description="Beta prior second shape for sigma")
    alpha_tau: float = Field(1.0, gt=0.0, description="Gamma prior shape for tau")
    beta_tau: float = Field(1.0, gt=0.0, description="Gamma prior rate for tau")
    random_scan: bool = Field(False, description="Visit observations in random order")
    grid_min: Optional[float] = Field(None, description="Density grid lower bound")
    grid_max: Optional[float] = Field(None, description="Density grid upper bound")
    grid_points: int = Field(200, ge=2, description="Density grid points per dimension")
    repeats: int = Field(1, description="Independent chains with spawned seeds")
    workers: int = Field(1, ge=1, description="Processes used for repeated chains")

    @field_validator("C")
    @classmethod
    def validate_c(cls, v):
        """Validate the number of empty clusters."""
        if v < 1:
            raise ValueError(f"C must be a positive integer, got {v}")
        return v

    @field_validator("thin", "repeats")
    @classmethod
    def validate_positive(cls, v, info):
        """Validate counts that must be at least one."""
        if v < 1:
            raise ValueError(f"{info.field_name} must be >= 1, got {v}")
        return v

    @model_validator(mode="after")
    def validate_combination(self):
        """Validate schedule and sampler/model compatibility."""
        if self.burnin + self.iters < 1:
            raise ValueError("burnin + iters must be at least 1")
        if self.sampler == "marg-conj" and self.model != "conjugate-1d":
            raise ValueError("sampler 'marg-conj' requires model 'conjugate-1d'")
        if self.grid_min is not None and self.grid_max is not None:
            if self.grid_min >= self.grid_max:
                raise ValueError("grid_min must be smaller than grid_max")
        return self

    @property
    def num_retained(self) -> int:
        """Number of samples kept after burn-in and thinning."""
        return self.iters // self.thin

    def nggp_params(self) -> NggpParams:
        """Initial NGGP parameters."""
        return NggpParams(a=self.a, sigma=self.sigma, tau=self.tau_fixed)

    def hyperprior(self) -> HyperpriorConfig:
        """Hyperprior settings implied by this run."""
        return HyperpriorConfig(
            alpha_a=self.alpha_a,
            beta_a=self.beta_a,
            alpha_sigma=self.alpha_sigma,
            beta_sigma=self.beta_sigma,
            alpha_tau=self.alpha_tau,
            beta_tau=self.beta_tau,
            infer_sigma=not self.fix_sigma,
            infer_tau=self.infer_tau,
        )


class GewekeConfig(BaseModel):
    """Setup of a joint-distribution (Geweke) test."""

    sampler: SamplerName
    n: int = Field(5, ge=1, le=6)
    iterations: int = Field(20_000, ge=100)
    C: int = Field(2, ge=1)
    sigma: float = Field(0.3, ge=0.0, lt=1.0, description="Fixed sigma")
    tau: float = Field(1.0, gt=0.0)
    alpha_a: float = Field(2.0, gt=0.0)
    beta_a: float = Field(2.0, gt=0.0)
    thin: int = Field(1, ge=1, description="Sweeps between successive-conditional samples")
