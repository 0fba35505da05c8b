"""Experiment commands: certify, simulate, picard, kolmogorov."""

from typing import Annotated

import typer

from spdelab import operation
from spdelab.cli import (
    ConfigOption,
    ExperimentContext,
    OutOption,
    PathsOption,
    SeedOption,
    cli,
    finish,
)


@cli.command("certify")
def cli_certify(
    config: ConfigOption = None,
    out: OutOption = None,
    allow_grid: Annotated[
        bool,
        typer.Option(
            "--allow-grid",
            help="Also certify the one-sided Lipschitz conditions (grid-verified)",
        ),
    ] = False,
):
    """Certify the coercivity condition of the configured model.

    Exit code 2 if the certificate is falsified.
    """
    with ExperimentContext(config, out=out) as experiment:
        job = operation.certify(experiment, allow_grid=allow_grid)
    finish(job)


@cli.command("simulate")
def cli_simulate(
    config: ConfigOption = None,
    seed: SeedOption = None,
    paths: PathsOption = None,
    out: OutOption = None,
):
    """Run the ensemble, write moments.csv and the bound check reports.

    Exit code 3 if any configured check fails.
    """
    with ExperimentContext(config, seed=seed, paths=paths, out=out) as experiment:
        job = operation.simulate(experiment)
    finish(job)


@cli.command("picard")
def cli_picard(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
):
    """Picard contraction experiment on a frozen noise path.

    Exit code 3 if the iteration does not contract below the budget.
    """
    with ExperimentContext(config, seed=seed, out=out) as experiment:
        job = operation.picard(experiment)
    finish(job)


@cli.command("kolmogorov")
def cli_kolmogorov(
    config: ConfigOption = None,
    seed: SeedOption = None,
    paths: PathsOption = None,
    out: OutOption = None,
):
    """Kolmogorov bound self-test on scalar Brownian paths."""
    with ExperimentContext(config, seed=seed, out=out) as experiment:
        job = operation.kolmogorov(experiment, paths=paths)
    finish(job)
