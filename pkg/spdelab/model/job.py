"""Run records of the experiment commands."""

from datetime import datetime, timedelta, timezone
from enum import IntEnum
from functools import cached_property
from typing import Self, TypeVar

from anystore.logging import get_logger
from anystore.model import BaseModel
from anystore.util import ensure_uuid
from pydantic import computed_field, field_validator
from structlog.stdlib import BoundLogger

from spdelab.exceptions import CONFIG_ERRORS

EJ = TypeVar("EJ", bound="ExperimentJob")


class ExitCode(IntEnum):
    PASS = 0
    CONFIG_ERROR = 1
    FALSIFIED = 2
    CHECK_FAILED = 3


def _now() -> datetime:
    return datetime.now(timezone.utc)


class ExperimentJob(BaseModel):
    """One run of an experiment command.

    The record is written to ``jobs/runs/{name}/{run_id}.json`` below the
    output directory when the run begins, on every checkpoint and when it
    ends. Run records carry wall clock times, so they are not part of the
    reproducible artifacts.
    """

    run_id: str
    experiment: str
    output_dir: str
    started: datetime | None = None
    stopped: datetime | None = None
    checkpoint: datetime | None = None
    running: bool = False
    exc: str | None = None
    took: timedelta = timedelta()
    exit_code: ExitCode = ExitCode.PASS
    artifacts: list[str] = []

    @computed_field
    @property
    def name(self) -> str:
        return self.__class__.__name__

    @property
    def status(self) -> str:
        return self.exit_code.name.lower()

    @field_validator("run_id", mode="before")
    @classmethod
    def ensure_run_id(cls, value: str | None = None) -> str:
        return value or ensure_uuid()

    @classmethod
    def make(cls, **kwargs) -> Self:
        kwargs["run_id"] = cls.ensure_run_id(kwargs.get("run_id"))
        return cls(**kwargs)

    def begin(self) -> None:
        self.started = _now()
        self.running = True

    def mark(self) -> None:
        self.checkpoint = _now()

    def end(self, exc: BaseException | None = None) -> None:
        """Stop the clock. A configuration error raised by the run turns
        into exit code 1, any other exception is only recorded."""
        self.running = False
        self.stopped = _now()
        if exc is not None:
            self.exc = str(exc)
            if isinstance(exc, CONFIG_ERRORS):
                self.exit_code = ExitCode.CONFIG_ERROR
        if self.started:
            self.took = self.stopped - self.started

    def finish(self, code: ExitCode, *artifacts: str) -> None:
        self.exit_code = code
        self.artifacts.extend(artifacts)

    @cached_property
    def log(self) -> BoundLogger:
        return get_logger(
            f"{self.experiment}.{self.name}",
            run_id=self.run_id,
            experiment=self.experiment,
        )


class CertifyJob(ExperimentJob):
    allow_grid: bool = False


class SimulateJob(ExperimentJob):
    paths: int
    master_seed: int


class PicardJob(ExperimentJob):
    master_seed: int


class KolmogorovJob(ExperimentJob):
    master_seed: int
