"""Factory functions for running experiment operations.

Example:
    ```python
    from spdelab.core import load_config
    from spdelab.operation import certify, simulate

    config = load_config("experiments/allen_cahn.yml")
    certify(config).exit_code
    simulate(config, paths=200, master_seed=1)
    ```
"""

from spdelab.model.experiment import ExperimentConfig
from spdelab.model.job import CertifyJob, KolmogorovJob, PicardJob, SimulateJob
from spdelab.operation.certify import CertifyOperation
from spdelab.operation.kolmogorov import KolmogorovOperation
from spdelab.operation.picard import PicardOperation
from spdelab.operation.simulate import SimulateOperation


def _job_data(config: ExperimentConfig, output_dir: str | None) -> dict:
    return {"experiment": config.name, "output_dir": output_dir or config.output_dir}


def certify(
    config: ExperimentConfig, allow_grid: bool = False, output_dir: str | None = None
) -> CertifyJob:
    """
    Certify the hypotheses of the configured model and write
    `certificate.json`.

    Args:
        config: Experiment
        allow_grid: Also certify the one-sided Lipschitz conditions and accept
            their grid verification
        output_dir: Override of `config.output_dir`

    Returns:
        The completed job, `exit_code` 0 or 2 (falsified)
    """
    job = CertifyJob.make(allow_grid=allow_grid, **_job_data(config, output_dir))
    return CertifyOperation(job, config).run()


def simulate(
    config: ExperimentConfig,
    paths: int | None = None,
    master_seed: int | None = None,
    output_dir: str | None = None,
) -> SimulateJob:
    """
    Run the ensemble, write `moments.csv` and `reports.json`.

    Returns:
        The completed job, `exit_code` 0 or 3 (a check failed)
    """
    job = SimulateJob.make(
        paths=paths or config.ensemble.paths,
        master_seed=config.ensemble.master_seed if master_seed is None else master_seed,
        **_job_data(config, output_dir),
    )
    return SimulateOperation(job, config).run()


def picard(
    config: ExperimentConfig,
    master_seed: int | None = None,
    output_dir: str | None = None,
) -> PicardJob:
    """Run the Picard contraction experiment and write `contraction.json`."""
    job = PicardJob.make(
        master_seed=config.ensemble.master_seed if master_seed is None else master_seed,
        **_job_data(config, output_dir),
    )
    return PicardOperation(job, config).run()


def kolmogorov(
    config: ExperimentConfig,
    paths: int | None = None,
    master_seed: int | None = None,
    output_dir: str | None = None,
) -> KolmogorovJob:
    """Run the Brownian Kolmogorov self-test and write `kolmogorov.json`."""
    if paths:
        config = config.model_copy(
            update={"kolmogorov": config.kolmogorov.model_copy(update={"paths": paths})}
        )
    job = KolmogorovJob.make(
        master_seed=config.ensemble.master_seed if master_seed is None else master_seed,
        **_job_data(config, output_dir),
    )
    return KolmogorovOperation(job, config).run()
