"""Library-specific types and result classes."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class PartitionShape:
    """Block sizes of a partition of n observations."""

    n: int
    sizes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if any(s < 1 for s in self.sizes):
            raise ValueError(f"Cluster sizes must be positive: {self.sizes}")
        if sum(self.sizes) != self.n:
            raise ValueError(f"Sizes {self.sizes} do not sum to n={self.n}")

    @classmethod
    def from_sizes(cls, sizes) -> "PartitionShape":
        """Build a shape whose n is the sum of the sizes."""
        sizes = tuple(int(s) for s in sizes)
        return cls(n=sum(sizes), sizes=sizes)

    @property
    def num_clusters(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class AuxiliaryU:
    """Auxiliary variable U stored on the log scale."""

    v: float

    @classmethod
    def from_u(cls, u: float) -> "AuxiliaryU":
        if u <= 0:
            raise ValueError(f"U must be positive, got {u}")
        return cls(v=math.log(u))

    @property
    def u(self) -> float:
        return math.exp(self.v)


@dataclass
class ChainSample:
    """One retained MCMC state."""

    iteration: int
    num_clusters: int
    a: float
    sigma: float
    tau: float
    log_u: float
    labels: np.ndarray
    sigma0: Any = None
    components: Optional[List[Any]] = None
    num_random_atoms: Optional[int] = None


@dataclass
class SampleTrace:
    """Retained samples of one chain."""

    samples: List[ChainSample] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.samples)

    def append(self, sample: ChainSample) -> None:
        self.samples.append(sample)

    def column(self, name: str) -> np.ndarray:
        """Scalar column across samples (e.g. 'num_clusters', 'sigma')."""
        return np.array([getattr(s, name) for s in self.samples], dtype=float)

    def label_matrix(self) -> np.ndarray:
        """Labels as an (num_samples, n) integer array."""
        return np.vstack([s.labels for s in self.samples])


@dataclass
class RunSummary:
    """Summary of one or more chains written to summary.json."""

    sampler: str
    model: str
    seed: int
    num_samples: int
    runtime_seconds: float
    ess_num_clusters: Optional[float]
    posterior_means: Dict[str, float]
    acceptance_rates: Dict[str, float]
    random_atoms: Optional[Dict[str, float]] = None
    spawn_key: List[int] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    chains: Optional[List[Dict[str, Any]]] = None
    ess_num_clusters_se: Optional[float] = None
    runtime_seconds_se: Optional[float] = None


@dataclass
class DensityGrid:
    """Posterior mean and pointwise 95% band of the predictive density."""

    points: np.ndarray
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray


@dataclass
class SetPartitionList:
    """All set partitions of {0, ..., n-1}."""

    n: int
    partitions: List[List[List[int]]]

    def __len__(self) -> int:
        return len(self.partitions)

    def shapes(self) -> List[PartitionShape]:
        return [
            PartitionShape(n=self.n, sizes=tuple(len(b) for b in blocks))
            for blocks in self.partitions
        ]


@dataclass
class CheckResult:
    """Outcome of one oracle check."""

    name: str
    passed: bool
    value: Any = None
    detail: str = ""


@dataclass
class VerifyReport:
    """Outcome of the verification suite."""

    level: str
    checks: List[CheckResult] = field(default_factory=list)
    duration_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)
