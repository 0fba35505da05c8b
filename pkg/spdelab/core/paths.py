"""Layout of an experiment output directory.

    {output_dir}/
        config.yml              # resolved experiment config
        certificate.json        # hypothesis certificate
        moments.csv             # t, norm_id, rho, estimate, stderr
        reports.json            # bound check reports of `simulate`
        contraction.json        # Picard contraction report
        kolmogorov.json         # Brownian self-test report
        jobs/
            runs/
                {job_type}/
                    {run_id}.json

Everything except the job runs is a pure function of config and seed.
"""

from anystore.util import ensure_uuid

CONFIG = "config.yml"
CERTIFICATE = "certificate.json"
MOMENTS = "moments.csv"
REPORTS = "reports.json"
CONTRACTION = "contraction.json"
KOLMOGOROV = "kolmogorov.json"

ARTIFACTS = (CONFIG, CERTIFICATE, MOMENTS, REPORTS, CONTRACTION, KOLMOGOROV)

JOBS = "jobs"
JOB_RUNS = f"{JOBS}/runs"


def job_prefix(name: str) -> str:
    return f"{JOB_RUNS}/{name}"


def job_run(name: str, run_id: str | None = None) -> str:
    return f"{job_prefix(name)}/{run_id or ensure_uuid()}.json"
