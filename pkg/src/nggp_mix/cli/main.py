#!/usr/bin/env python3
"""Main CLI entry point for nggp-mix."""

import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import click

from .. import (
    prior_histograms as prior_histograms_function,
    prior_moments as prior_moments_function,
    run as run_function,
    verify as verify_function,
)
from ..types import HyperpriorConfig, NggpParams
from ..types.config import load_config
from ..lib.prior_sim import write_rows
from .run_options import describe_run_options, generate_run_options, parse_run_config_from_cli

logger = logging.getLogger(__name__)


def _float_list(value: str):
    return [float(x) for x in value.split(",") if x.strip()]


def _int_list(value: str):
    return [int(x) for x in value.split(",") if x.strip()]


@click.group()
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.pass_context
def cli(ctx, debug):
    """nggp-mix: MCMC for normalized generalized Gamma process mixtures"""
    ctx.ensure_object(dict)
    ctx.obj["debug"] = debug

    # Skip config loading if just showing help or for commands that don't need it
    if ctx.invoked_subcommand is None or "--help" in sys.argv or "-h" in sys.argv:
        return

    no_config_commands = ["list-options"]
    if ctx.invoked_subcommand in no_config_commands:
        return

    # Load configuration from environment variables
    try:
        app_config = load_config()
    except Exception as e:
        click.echo(f"Error loading config: {e}", err=True)
        sys.exit(1)

    if debug:
        app_config.logging.level = "DEBUG"

    app_config.setup_logging()
    ctx.obj["config"] = app_config


@cli.command()
@generate_run_options
@click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="YAML file with run options; command-line flags take precedence",
)
@click.option(
    "--output",
    "-o",
    type=click.Choice(["json", "text"]),
    default="text",
    help="Output format of the summary",
)
@click.pass_context
def run(ctx, config_file, output, **run_kwargs):
    """Run an MCMC sampler on a CSV file and write its outputs.

    Writes samples.csv, labels.csv, coclust.csv, density_grid.csv (1-D and 2-D
    data) and summary.json to the output directory.
    """
    try:
        run_config = parse_run_config_from_cli(config_file, **run_kwargs)
        summary = run_function(run_config)

        if output == "json":
            click.echo(json.dumps(asdict(summary), indent=2, sort_keys=True))
        else:
            click.echo(f"Sampler: {summary.sampler} ({summary.model}), seed {summary.seed}")
            click.echo(f"Retained samples: {summary.num_samples}")
            click.echo(f"Runtime: {summary.runtime_seconds:.2f}s")
            if summary.ess_num_clusters is not None:
                click.echo(f"ESS of number of clusters: {summary.ess_num_clusters:.1f}")
            for name, value in summary.posterior_means.items():
                click.echo(f"  mean {name}: {value:.4g}")
            for name, rate in summary.acceptance_rates.items():
                click.echo(f"  acceptance {name}: {rate:.3f}")

    except Exception as e:
        logger.error("Run failed", exc_info=ctx.obj["debug"])
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)


@cli.command()
@click.option(
    "--level",
    type=click.Choice(["quick", "default"]),
    default=None,
    help="Oracle suite size (default from NGGP_MIX_VERIFY_LEVEL)",
)
@click.option("--seed", default=0, type=int, help="Seed of the Monte Carlo checks")
@click.pass_context
def verify(ctx, level, seed):
    """Run the oracle suite and print a JSON report; exits 1 if a check fails."""
    try:
        report = verify_function(level, seed)
        result = {
            "level": report.level,
            "passed": report.passed,
            "duration_seconds": report.duration_seconds,
            "checks": [asdict(check) for check in report.checks],
        }
        click.echo(json.dumps(result, indent=2, default=float))
    except Exception as e:
        logger.error("Verify failed", exc_info=ctx.obj["debug"])
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)

    if not report.passed:
        sys.exit(1)


@cli.command("prior-sim")
@click.option("--n", "ns", default="100", help="Numbers of observations (comma-separated)")
@click.option("--a", "a_values", default="1.0", help="Values of a (comma-separated)")
@click.option("--sigma", "sigma_values", default="0.5", help="Values of sigma (comma-separated)")
@click.option("--tau", default=1.0, type=float, help="Value of tau")
@click.option("--reps", default=1000, type=int, help="Simulated partitions per setting")
@click.option("--seed", default=0, type=int, help="Random seed")
@click.option(
    "--hyperprior",
    is_flag=True,
    help="Draw a ~ Gamma(alpha_a, beta_a) and sigma ~ Beta(alpha_sigma, beta_sigma) "
    "and report the mean and sd of the number of clusters per draw",
)
@click.option("--num-hyper-draws", default=100, type=int, help="Hyperparameter draws")
@click.option("--alpha-a", default=1.0, type=float, help="Gamma prior shape for a")
@click.option("--beta-a", default=1.0, type=float, help="Gamma prior rate for a")
@click.option("--alpha-sigma", default=1.0, type=float, help="Beta prior first shape for sigma")
@click.option("--beta-sigma", default=2.0, type=float, help="Beta prior second shape for sigma")
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="CSV file for the results (printed as CSV to stdout when omitted)",
)
@click.pass_context
def prior_sim(
    ctx,
    ns,
    a_values,
    sigma_values,
    tau,
    reps,
    seed,
    hyperprior,
    num_hyper_draws,
    alpha_a,
    beta_a,
    alpha_sigma,
    beta_sigma,
    out,
):
    """Simulate the prior distribution of the number of clusters."""
    try:
        if hyperprior:
            hyper = HyperpriorConfig(
                alpha_a=alpha_a, beta_a=beta_a, alpha_sigma=alpha_sigma, beta_sigma=beta_sigma
            )
            rows = []
            for n in _int_list(ns):
                rows += prior_moments_function(n, hyper, tau, num_hyper_draws, reps, seed)
        else:
            params = [
                NggpParams(a=a, sigma=sigma, tau=tau)
                for a in _float_list(a_values)
                for sigma in _float_list(sigma_values)
            ]
            rows = prior_histograms_function(_int_list(ns), params, reps, seed)

        if out is not None:
            write_rows(rows, out)
            click.echo(f"Wrote {len(rows)} rows to {out}")
        elif rows:
            click.echo(",".join(rows[0]))
            for row in rows:
                click.echo(",".join(str(value) for value in row.values()))

    except Exception as e:
        logger.error("Prior simulation failed", exc_info=ctx.obj["debug"])
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)


@cli.command()
@click.option(
    "--output",
    "-o",
    type=click.Choice(["text", "json"]),
    default="text",
    help="Output format",
)
def list_options(output):
    """List all run options generated from RunConfig."""
    try:
        options = describe_run_options()

        if output == "json":
            click.echo(json.dumps({"run_options": options}, indent=2))
        else:
            click.echo("Available Run Options:")
            click.echo()
            for opt in options:
                click.echo(f"  {opt['cli_option']}")
                click.echo(f"    Field: {opt['name']}")
                click.echo(f"    Type: {opt['type']}")
                if opt["default"] is not None:
                    click.echo(f"    Default: {opt['default']}")
                if opt["description"]:
                    click.echo(f"    Description: {opt['description']}")
                click.echo()

            click.echo(f"Total: {len(options)} run options available")
            click.echo()
            click.echo("These options are accepted by the run command and its --config file")

    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(1)


def main():
    """Main CLI entry point."""
    cli()


if __name__ == "__main__":
    main()
