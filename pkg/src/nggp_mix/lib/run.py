"""Chain execution and output writing."""

import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from ..core.diagnostics import MIN_ESS_LENGTH, coclustering, density_grid, ess
from ..core.errors import ConfigurationError
from ..core.kernels import KernelBase, build_weakly_informative
from ..core.samplers import SAMPLED, ChainState, init_chain_state, make_sweep
from ..types import ChainSample, DensityGrid, RunConfig, RunSummary, RuntimeSettings, SampleTrace
from .load_data import load_csv

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ("iteration", "num_clusters", "a", "sigma", "tau", "log_u", "sigma0")
PROGRESS_STEPS = 10
# Grid margin as a share of the data range when no bounds are given
GRID_MARGIN = 0.1
DENSITY_MAX_SAMPLES = 1000
# Spawn-key suffix of the density-grid stream
DENSITY_STREAM = 1


@dataclass
class ChainResult:
    """Retained samples and run statistics of one chain."""

    trace: SampleTrace
    base: KernelBase
    runtime_seconds: float
    acceptance_rates: Dict[str, float] = field(default_factory=dict)


def as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator from an integer seed or a SeedSequence."""
    return np.random.Generator(np.random.PCG64(as_seed_sequence(seed)))


def density_seed(seed) -> np.random.SeedSequence:
    """Child stream of a chain's seed reserved for the density grid."""
    seq = as_seed_sequence(seed)
    spawn_key = tuple(seq.spawn_key) + (DENSITY_STREAM,)
    return np.random.SeedSequence(seq.entropy, spawn_key=spawn_key)


def prepare_model(data: np.ndarray, config: RunConfig) -> KernelBase:
    """Base measure for the configured model, checked against the data."""
    if config.model == "conjugate-1d" and data.shape[1] != 1:
        raise ConfigurationError(
            f"Model 'conjugate-1d' needs one-dimensional data, got D={data.shape[1]}"
        )
    return build_weakly_informative(data, conjugate=config.model == "conjugate-1d")


def record_sample(state: ChainState, iteration: int, sampled: bool) -> ChainSample:
    """Snapshot of the chain with labels numbered by first appearance."""
    partition = state.partition
    labels = partition.canonical_labels()
    components = None
    if sampled:
        order: Dict[int, int] = {}
        for cid in partition.labels.tolist():
            order.setdefault(cid, len(order))
        components = [partition.param(cid) for cid in order]
    return ChainSample(
        iteration=iteration,
        num_clusters=partition.num_clusters,
        a=state.params.a,
        sigma=state.params.sigma,
        tau=state.params.tau,
        log_u=state.u.v,
        labels=labels,
        sigma0=state.base.Sigma0,
        components=components,
        num_random_atoms=state.atoms.num_random if state.atoms is not None else None,
    )


def run_chain(
    data: np.ndarray,
    config: RunConfig,
    seed,
    settings: Optional[RuntimeSettings] = None,
) -> ChainResult:
    """Run one chain and keep every thin-th iteration after burn-in.

    Args:
        data: (n, D) observations
        config: Run configuration
        seed: Integer seed or SeedSequence of this chain
        settings: Runtime limits (atom cap and floor)

    Returns:
        ChainResult with the trace, the base-measure template and the sampling time
    """
    settings = settings or RuntimeSettings()
    rng = make_rng(seed)
    base = prepare_model(data, config)
    sampled = config.sampler in SAMPLED
    sweep = make_sweep(config.sampler, config.C)
    total = config.burnin + config.iters
    n, dim = data.shape
    logger.info(
        f"Starting {config.sampler} chain: model={config.model}, n={n}, D={dim}, "
        f"iterations={total}, seed={config.seed}"
    )

    start = time.perf_counter()
    state = init_chain_state(
        data,
        config.nggp_params(),
        base,
        config.hyperprior(),
        rng,
        sampled=sampled,
        random_scan=config.random_scan,
        max_atoms=settings.max_atoms,
        atom_floor=settings.atom_floor,
    )
    trace = SampleTrace()
    report_every = max(1, total // PROGRESS_STEPS)
    for t in range(1, total + 1):
        state = sweep(state, data, rng)
        kept = t - config.burnin
        if kept > 0 and kept % config.thin == 0:
            trace.append(record_sample(state, kept, sampled))
        if t % report_every == 0:
            logger.info(
                f"Iteration {t}/{total}: |pi|={state.partition.num_clusters}, "
                f"a={state.params.a:.4g}, sigma={state.params.sigma:.4g}"
            )
    runtime = time.perf_counter() - start

    logger.info(f"Chain finished in {runtime:.2f}s with {len(trace)} retained samples")
    return ChainResult(
        trace=trace,
        base=base,
        runtime_seconds=runtime,
        acceptance_rates=state.acceptance.rates(),
    )


def default_grid(data: np.ndarray, config: RunConfig) -> Optional[np.ndarray]:
    """Evaluation points for the density: a line in 1-D, a square lattice in 2-D."""
    dim = data.shape[1]
    if dim > 2:
        return None
    lo, hi = data.min(axis=0), data.max(axis=0)
    margin = GRID_MARGIN * (hi - lo)
    lo, hi = lo - margin, hi + margin
    if config.grid_min is not None:
        lo = np.full(dim, config.grid_min)
    if config.grid_max is not None:
        hi = np.full(dim, config.grid_max)
    axes = [np.linspace(lo[d], hi[d], config.grid_points) for d in range(dim)]
    if dim == 1:
        return axes[0][:, None]
    xx, yy = np.meshgrid(axes[0], axes[1], indexing="ij")
    return np.column_stack([xx.ravel(), yy.ravel()])


def _write_rows(path: Path, header: Optional[List[str]], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        if header:
            writer.writerow(header)
        writer.writerows(rows)


def _float(x: float) -> str:
    return repr(float(x))


def write_samples(path: Path, trace: SampleTrace) -> None:
    header = list(SAMPLE_COLUMNS)
    with_atoms = bool(trace.samples) and trace.samples[0].num_random_atoms is not None
    if with_atoms:
        header.append("num_random_atoms")
    rows = []
    for s in trace.samples:
        sigma0 = sigma0_summary_value(s.sigma0)
        row = [s.iteration, s.num_clusters, _float(s.a), _float(s.sigma), _float(s.tau)]
        row += [_float(s.log_u), _float(sigma0)]
        if with_atoms:
            row.append(s.num_random_atoms)
        rows.append(row)
    _write_rows(path, header, rows)


def sigma0_summary_value(sigma0) -> float:
    """Scalar trace value of a stored Sigma0 (value in 1-D, log-determinant otherwise)."""
    matrix = np.atleast_2d(np.asarray(sigma0, dtype=float))
    if matrix.shape == (1, 1):
        return float(matrix[0, 0])
    return float(np.linalg.slogdet(matrix)[1])


def write_labels(path: Path, trace: SampleTrace) -> None:
    n = trace.samples[0].labels.size if trace.samples else 0
    header = ["iteration"] + [f"y{i}" for i in range(n)]
    _write_rows(path, header, ([s.iteration, *s.labels.tolist()] for s in trace.samples))


def write_matrix(path: Path, matrix: np.ndarray) -> None:
    _write_rows(path, None, ([_float(x) for x in row] for row in matrix))


def write_density(path: Path, grid: DensityGrid) -> None:
    dim = grid.points.shape[1]
    header = ["x"] if dim == 1 else [f"x{d + 1}" for d in range(dim)]
    header += ["mean", "lower", "upper"]
    rows = (
        [*(_float(x) for x in point), _float(m), _float(lo), _float(hi)]
        for point, m, lo, hi in zip(grid.points, grid.mean, grid.lower, grid.upper)
    )
    _write_rows(path, header, rows)


def summarize_chain(
    result: ChainResult, config: RunConfig, seed, with_ess: bool = True
) -> RunSummary:
    """Summary of one chain; ESS is null below the minimum trace length.

    ``seed`` is the chain's integer seed or SeedSequence; the summary records its
    entropy and spawn key, which together reproduce the chain.
    """
    seq = as_seed_sequence(seed)
    trace = result.trace
    k = trace.column("num_clusters")
    if not with_ess:
        ess_k = None
    elif len(trace) >= MIN_ESS_LENGTH:
        ess_k = ess(k)
    else:
        logger.warning(f"Only {len(trace)} retained samples; ESS is not reported")
        ess_k = None
    means = {}
    if len(trace):
        for name in ("num_clusters", "a", "sigma", "tau", "log_u"):
            means[name] = float(trace.column(name).mean())
    random_atoms = None
    if len(trace) and trace.samples[0].num_random_atoms is not None:
        counts = trace.column("num_random_atoms")
        random_atoms = {"mean": float(counts.mean()), "max": float(counts.max())}
    return RunSummary(
        sampler=config.sampler,
        model=config.model,
        seed=int(seq.entropy),
        spawn_key=list(seq.spawn_key),
        num_samples=len(trace),
        runtime_seconds=result.runtime_seconds,
        ess_num_clusters=ess_k,
        posterior_means=means,
        acceptance_rates=result.acceptance_rates,
        random_atoms=random_atoms,
        config=config.model_dump(mode="json"),
    )


def write_chain(
    out: Path, data: np.ndarray, result: ChainResult, config: RunConfig, seed
) -> RunSummary:
    """Write samples, labels, co-clustering, density grid and summary of one chain."""
    out.mkdir(parents=True, exist_ok=True)
    trace = result.trace
    write_samples(out / "samples.csv", trace)
    write_labels(out / "labels.csv", trace)
    if len(trace):
        write_matrix(out / "coclust.csv", coclustering(trace))
        points = default_grid(data, config)
        if points is not None:
            rng = make_rng(density_seed(seed))
            grid = density_grid(
                trace, points, data, result.base, rng=rng, max_samples=DENSITY_MAX_SAMPLES
            )
            write_density(out / "density_grid.csv", grid)
    else:
        logger.warning("No retained samples; co-clustering and density grid are skipped")

    summary = summarize_chain(result, config, seed)
    write_summary(out / "summary.json", summary)
    return summary


def write_summary(path: Path, summary: RunSummary) -> None:
    with path.open("w", encoding="utf-8") as handle:
        json.dump(asdict(summary), handle, indent=2, sort_keys=True)
        handle.write("\n")


def _mean_se(values: List[float]) -> tuple:
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        return float(x.mean()), 0.0
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def _run_repeat(args) -> ChainResult:
    data, config, seed_seq, settings = args
    return run_chain(data, config, seed_seq, settings)


def run(config: RunConfig, settings: Optional[RuntimeSettings] = None) -> RunSummary:
    """Load the data, run the configured chain(s) and write every output file.

    With ``repeats`` > 1 each chain gets a seed spawned from the master seed and
    its own ``chain_XX`` directory; the top-level summary.json then holds the
    mean and standard error of ESS and runtime across chains.

    Args:
        config: Run configuration
        settings: Runtime settings (output directory default, atom cap and floor)

    Returns:
        The summary written to summary.json
    """
    settings = settings or RuntimeSettings()
    if config.data is None:
        raise ConfigurationError("A data file is required (--data)")
    data = load_csv(config.data)
    prepare_model(data, config)
    out = Path(config.out) if config.out is not None else Path(settings.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    if config.repeats == 1:
        result = run_chain(data, config, config.seed, settings)
        summary = write_chain(out, data, result, config, config.seed)
        logger.info(f"Outputs written to {out}")
        return summary

    seeds = np.random.SeedSequence(config.seed).spawn(config.repeats)
    jobs = [(data, config, s, settings) for s in seeds]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_repeat, jobs))
    else:
        results = [_run_repeat(job) for job in jobs]

    chains: List[Dict[str, Any]] = []
    for r, (result, seed) in enumerate(zip(results, seeds)):
        chain_summary = write_chain(out / f"chain_{r:02d}", data, result, config, seed)
        chain_summary.config = {}
        chains.append(asdict(chain_summary))

    ess_values = [c["ess_num_clusters"] for c in chains if c["ess_num_clusters"] is not None]
    ess_mean, ess_se = _mean_se(ess_values) if ess_values else (None, None)
    runtime_mean, runtime_se = _mean_se([c["runtime_seconds"] for c in chains])
    pooled = SampleTrace([s for result in results for s in result.trace.samples])
    summary = summarize_chain(
        ChainResult(trace=pooled, base=results[0].base, runtime_seconds=runtime_mean),
        config,
        config.seed,
        with_ess=False,
    )
    summary.num_samples = len(pooled)
    summary.ess_num_clusters = ess_mean
    summary.ess_num_clusters_se = ess_se
    summary.runtime_seconds_se = runtime_se
    summary.acceptance_rates = _average_rates([r.acceptance_rates for r in results])
    summary.chains = chains
    write_summary(out / "summary.json", summary)
    logger.info(f"{config.repeats} chains written to {out}")
    return summary


def _average_rates(rates: List[Dict[str, float]]) -> Dict[str, float]:
    names = sorted({name for r in rates for name in r})
    return {name: float(np.mean([r[name] for r in rates if name in r])) for name in names}
