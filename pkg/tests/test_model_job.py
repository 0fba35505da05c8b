from datetime import timedelta

from spdelab.exceptions import InadmissibleParameterError
from spdelab.model.job import CertifyJob, ExitCode, ExperimentJob, SimulateJob


def make(**kwargs) -> SimulateJob:
    return SimulateJob.make(
        experiment="allen-cahn", output_dir="out", paths=10, master_seed=3, **kwargs
    )


def test_job_make():
    job = make()
    assert job.run_id is not None
    assert job.running is False
    assert job.exc is None
    assert job.name == "SimulateJob"
    assert make(run_id="run-1").run_id == "run-1"


def test_job_lifecycle():
    job = make()
    job.begin()
    assert job.running is True
    assert job.checkpoint is None
    job.mark()
    assert job.checkpoint is not None
    job.end(ValueError("boom"))
    assert job.running is False
    assert job.stopped is not None
    assert job.exc == "boom"
    # only configuration errors change the exit code
    assert job.exit_code == ExitCode.PASS
    assert isinstance(job.took, timedelta)
    assert job.took >= timedelta()


def test_job_config_error():
    job = make()
    job.begin()
    job.end(InadmissibleParameterError("eta"))
    assert job.exit_code == ExitCode.CONFIG_ERROR
    assert job.status == "config_error"


def test_experiment_job():
    job = make()
    assert job.exit_code == ExitCode.PASS
    assert job.status == "pass"
    assert job.log is not None

    job.finish(ExitCode.CHECK_FAILED, "moments.csv", "reports.json")
    assert job.status == "check_failed"
    assert job.artifacts == ["moments.csv", "reports.json"]

    # artifacts are not shared between jobs
    other = CertifyJob.make(experiment="allen-cahn", output_dir="out")
    assert other.artifacts == []
    assert other.allow_grid is False
    assert isinstance(other, ExperimentJob)


def test_exit_codes():
    assert [int(c) for c in ExitCode] == [0, 1, 2, 3]
    assert ExitCode.FALSIFIED.name.lower() == "falsified"
