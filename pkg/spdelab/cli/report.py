from typing import Annotated

import typer
from rich.console import Console
from rich.table import Table

from spdelab.cli import ExperimentContext, OutOption, cli
from spdelab.model.job import ExitCode
from spdelab.operation import summarize
from spdelab.util import artifact_checksums


@cli.command("report")
def cli_report(
    config: Annotated[
        str | None, typer.Option("--config", "-c", help="Experiment config yml")
    ] = None,
    out: OutOption = None,
):
    """Summarise the verdicts found in an experiment output directory."""
    with ExperimentContext(config, out=out) as experiment:
        rows, code = summarize(experiment.output_dir)
    table = Table(title=f"{experiment.name} ({experiment.output_dir})")
    table.add_column("artifact")
    table.add_column("check")
    table.add_column("verdict")
    table.add_column("margin", justify="right")
    for row in rows:
        margin = "" if row.margin is None else f"{row.margin:.4g}"
        table.add_row(row.artifact, row.check, row.verdict, margin)
    checksums = Table(title="sha256")
    checksums.add_column("artifact")
    checksums.add_column("checksum")
    for name, checksum in artifact_checksums(experiment.output_dir).items():
        checksums.add_row(name, checksum)
    out_console = Console()
    out_console.print(table)
    out_console.print(checksums)
    if code != ExitCode.PASS:
        raise typer.Exit(code=code)
