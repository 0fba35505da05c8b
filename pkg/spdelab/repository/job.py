"""Run records of one experiment command below an output directory."""

import contextlib
from typing import Generator, Generic

from anystore.logging import get_logger
from anystore.store import get_store
from anystore.types import Uri

from spdelab.core import paths
from spdelab.model.job import EJ, ExitCode

log = get_logger(__name__)


class JobRun(Generic[EJ]):
    """Handle on a running job, passed to `ExperimentOperation.handle`."""

    def __init__(self, repo: "JobRepository[EJ]", job: EJ) -> None:
        self.repo = repo
        self.job = job

    def save(self) -> None:
        """Checkpoint the record (artifacts written so far)."""
        self.job.mark()
        self.repo.put(self.job)


class JobRepository(Generic[EJ]):
    """
    Run records of one job type as JSON files.

    Example:
        ```python
        repo = JobRepository("out/allen-cahn", SimulateJob)
        with repo.run(job) as run:
            ...
            run.save()
        repo.latest()
        ```
    """

    def __init__(self, uri: Uri, model: type[EJ]) -> None:
        self.uri = uri
        self.job_type = model.__name__
        self._store = get_store(uri, model=model)

    def put(self, job: EJ) -> None:
        self._store.put(paths.job_run(self.job_type, job.run_id), job)

    def get(self, run_id: str) -> EJ:
        return self._store.get(paths.job_run(self.job_type, run_id))

    def iterate(self) -> Generator[EJ, None, None]:
        yield from self._store.iterate_values(prefix=paths.job_prefix(self.job_type))

    def latest(self) -> EJ | None:
        """Latest run by run id (run ids sort by creation time)."""
        keys = sorted(self._store.iterate_keys(prefix=paths.job_prefix(self.job_type)))
        if not keys:
            return None
        return self._store.get(keys[-1])

    def failed(self) -> list[EJ]:
        """Runs that ended with a non-zero exit code or an exception."""
        return [
            job
            for job in self.iterate()
            if job.exit_code != ExitCode.PASS or job.exc is not None
        ]

    @contextlib.contextmanager
    def run(self, job: EJ) -> Generator[JobRun[EJ], None, None]:
        """Record the job from begin to end. Exceptions (configuration
        errors included) are stored on the record and re-raised."""
        job.begin()
        self.put(job)
        try:
            yield JobRun(self, job)
        except BaseException as e:
            job.end(e)
            log.error(
                f"Run failed: {e}", job=self.job_type, run_id=job.run_id, uri=self.uri
            )
            raise
        else:
            job.end()
        finally:
            self.put(job)
