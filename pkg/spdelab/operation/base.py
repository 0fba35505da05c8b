from functools import cached_property
from typing import Generic

from anystore.model import BaseModel
from anystore.store import get_store
from anystore.util import dump_json_model, join_uri

from spdelab.core import paths
from spdelab.core.config import dump_config
from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.experiment import ExperimentConfig
from spdelab.model.job import EJ, ExitCode
from spdelab.model.noise import NoiseSpec
from spdelab.model.poly import PolyModel
from spdelab.repository.job import JobRepository, JobRun


class ExperimentOperation(Generic[EJ]):
    """
    A job-tracked run of one experiment step. Artifacts go to the config's
    output directory, the job record below its `jobs/` prefix.

    Subclasses implement `handle()` and return the exit code of the run.
    """

    target: str = ""  # main artifact

    def __init__(self, job: EJ, config: ExperimentConfig) -> None:
        self.job = job
        self.config = config
        self.log = job.log
        self.uri = job.output_dir
        self.jobs = JobRepository(self.uri, job.__class__)
        self._store = get_store(self.uri, serialization_mode="raw")

    @cached_property
    def basis(self) -> SpectralBasis:
        return self.config.build_basis()

    @cached_property
    def noise(self) -> NoiseSpec:
        return self.config.build_noise(self.basis)

    @cached_property
    def model(self) -> PolyModel:
        return self.config.build_model()

    @cached_property
    def u0(self) -> Field:
        return self.config.initial_state(self.basis)

    def handle(self, run: JobRun) -> ExitCode:
        raise NotImplementedError

    def write(self, name: str, data: str | bytes) -> str:
        self._store.put(name, data.encode() if isinstance(data, str) else data)
        self.job.artifacts.append(name)
        return join_uri(self.uri, name)

    def write_model(self, name: str, obj: BaseModel) -> str:
        return self.write(name, dump_json_model(obj, clean=True, newline=True))

    def run(self) -> EJ:
        """Execute the handle function and store the job result"""
        with self.jobs.run(self.job) as run:
            self.log.info(f"Start `{self.target}` ...", output_dir=self.uri)
            self.write(paths.CONFIG, dump_config(self.config))
            code = self.handle(run)
            run.job.finish(code)
        self.log.info(
            f"Done `{self.target}`.",
            exit_code=run.job.exit_code.value,
            status=run.job.status,
            took=run.job.took,
        )
        return run.job

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}({self.config.name})>"
