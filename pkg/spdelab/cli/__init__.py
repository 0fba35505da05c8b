"""Command-line interface for spdelab.

Defines the main Typer application, the shared experiment context and the
exit code contract (0 pass, 1 config error, 2 falsified certificate,
3 failed bound check). Submodules register their commands on ``cli``.
"""

from typing import Annotated, Optional

import typer
from anystore.cli import ErrorHandler
from anystore.logging import configure_logging
from rich.console import Console

from spdelab.core.config import load_config
from spdelab.core.settings import Settings, __version__
from spdelab.exceptions import CONFIG_ERRORS, ImproperlyConfigured
from spdelab.model.experiment import ExperimentConfig
from spdelab.model.job import ExitCode, ExperimentJob

settings = Settings()
cli = typer.Typer(
    no_args_is_help=True,
    pretty_exceptions_enable=settings.debug,
    name="spdelab",
)
console = Console(stderr=True)

ConfigOption = Annotated[
    Optional[str], typer.Option("--config", "-c", help="Experiment config yml")
]
SeedOption = Annotated[
    Optional[int], typer.Option("--seed", help="Master seed (overrides config)", min=0)
]
PathsOption = Annotated[
    Optional[int], typer.Option("--paths", help="Number of paths", min=1)
]
OutOption = Annotated[Optional[str], typer.Option("--out", help="Output directory")]


class ExperimentContext(ErrorHandler):
    """Load the experiment config with command line overrides applied.

        with ExperimentContext(config, seed=seed, out=out) as experiment:
            job = simulate(experiment)

    Configuration errors (on load or raised by the run) exit with code 1.
    """

    def __init__(
        self,
        uri: str | None,
        seed: int | None = None,
        paths: int | None = None,
        out: str | None = None,
    ) -> None:
        super().__init__()
        self.uri = uri
        self.overrides: dict = {}
        if seed is not None:
            self.overrides["ensemble"] = {"master_seed": seed}
        if paths is not None:
            self.overrides.setdefault("ensemble", {})["paths"] = paths
        if out is not None:
            self.overrides["output_dir"] = out

    def __enter__(self) -> ExperimentConfig:
        super().__enter__()
        try:
            return load_config(self.uri, **self.overrides)
        except ImproperlyConfigured as e:
            self.fail(e)

    def fail(self, e: BaseException):
        if settings.debug:
            raise e
        console.print(f"[red][bold]{type(e).__name__}[/bold]: {e}[/red]")
        raise typer.Exit(code=ExitCode.CONFIG_ERROR)

    def __exit__(self, exc_type, exc, tb):
        if isinstance(exc, CONFIG_ERRORS):
            self.fail(exc)
        return super().__exit__(exc_type, exc, tb)


def finish(job: ExperimentJob) -> None:
    """Print the job outcome and exit with its code."""
    color = "green" if job.exit_code == ExitCode.PASS else "red"
    console.print(
        f"[{color}]{job.name} `{job.experiment}`: {job.status}[/{color}] "
        f"({', '.join(job.artifacts)} in `{job.output_dir}`)"
    )
    if job.exit_code != ExitCode.PASS:
        raise typer.Exit(code=job.exit_code)


@cli.callback(invoke_without_command=True)
def cli_spdelab(
    version: Annotated[Optional[bool], typer.Option(..., help="Show version")] = False,
    settings: Annotated[
        Optional[bool], typer.Option(..., help="Show current settings")
    ] = False,
):
    if version:
        console.print(__version__)
        raise typer.Exit()
    settings_ = Settings()
    configure_logging(level=settings_.log_level)
    if settings:
        console.print(settings_)
        raise typer.Exit()


# Import submodules so their commands get registered on `cli`.
from spdelab.cli import experiments, report  # noqa: E402, F401
