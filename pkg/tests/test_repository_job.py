"""Tests for JobRepository - job run storage."""

from datetime import timedelta

import pytest

from spdelab.exceptions import ImproperlyConfigured
from spdelab.model.job import ExitCode, ExperimentJob
from spdelab.repository.job import JobRepository


class SampleJob(ExperimentJob):
    """Simple job model for testing."""

    message: str = ""


class OtherJob(SampleJob):
    pass


def make(run_id: str, message: str = "", model=SampleJob):
    return model.make(run_id=run_id, message=message, experiment="test", output_dir="out")


def test_repository_job_put_path(tmp_path):
    """Test put() stores job at jobs/runs/{JobTypeName}/{run_id}.json"""
    repo = JobRepository(tmp_path, SampleJob)
    repo.put(make("run-123", "hello"))
    expected_path = tmp_path / "jobs" / "runs" / "SampleJob" / "run-123.json"
    assert expected_path.exists()
    assert repo.get("run-123").message == "hello"


def test_repository_job_latest(tmp_path):
    """Test latest() returns most recent job by run_id."""
    repo = JobRepository(tmp_path, SampleJob)
    assert repo.latest() is None

    repo.put(make("2025-01-01", "first"))
    repo.put(make("2025-01-03", "third"))
    repo.put(make("2025-01-02", "second"))

    latest = repo.latest()
    assert latest is not None
    assert latest.run_id == "2025-01-03"
    assert latest.message == "third"


def test_repository_job_iterate(tmp_path):
    """Test iterate() yields all jobs for type."""
    repo = JobRepository(tmp_path, SampleJob)
    other_repo = JobRepository(tmp_path, OtherJob)

    repo.put(make("run-a", "a"))
    repo.put(make("run-b", "b"))
    other_repo.put(make("run-c", "c", OtherJob))

    jobs = list(repo.iterate())
    assert len(jobs) == 2
    assert len(list(other_repo.iterate())) == 1
    assert {j.message for j in jobs} == {"a", "b"}


def test_repository_job_run_context_manager(tmp_path):
    """Test run() context manager lifecycle."""
    repo = JobRepository(tmp_path, SampleJob)
    job = make("ctx-run", "context test")

    with repo.run(job) as run:
        assert run.job.running is True
        assert run.job.started is not None

        run.job.artifacts.append("certificate.json")
        run.save()
        saved = repo.get("ctx-run")
        assert saved.artifacts == ["certificate.json"]
        assert saved.checkpoint is not None

    final = repo.get("ctx-run")
    assert final.running is False
    assert final.stopped is not None


def test_repository_job_run_context_manager_exception(tmp_path):
    """Test run() context manager records exception."""
    repo = JobRepository(tmp_path, SampleJob)

    with pytest.raises(ValueError):
        with repo.run(make("exc-run")):
            raise ValueError("Test error")

    final = repo.get("exc-run")
    assert final.running is False
    assert final.exc == "Test error"


def test_repository_job_run_config_error(tmp_path):
    """A configuration error raised inside the run sets exit code 1."""
    repo = JobRepository(tmp_path, SampleJob)

    with pytest.raises(ImproperlyConfigured):
        with repo.run(make("config-run")):
            raise ImproperlyConfigured("no cutoff")

    final = repo.get("config-run")
    assert final.exit_code == ExitCode.CONFIG_ERROR
    assert final.exc == "no cutoff"
    assert [j.run_id for j in repo.failed()] == ["config-run"]


def test_repository_job_failed(tmp_path):
    repo = JobRepository(tmp_path, SampleJob)
    with repo.run(make("ok")):
        pass
    with repo.run(make("bad")) as run:
        run.job.finish(ExitCode.CHECK_FAILED)
    assert [j.run_id for j in repo.failed()] == ["bad"]
    assert repo.get("ok").took >= timedelta()
