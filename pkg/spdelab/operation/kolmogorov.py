from spdelab.core import paths
from spdelab.logic.bounds import check_kolmogorov
from spdelab.logic.holder import brownian_paths
from spdelab.model.job import ExitCode, KolmogorovJob
from spdelab.operation.base import ExperimentOperation
from spdelab.repository.job import JobRun


class KolmogorovOperation(ExperimentOperation[KolmogorovJob]):
    """Kolmogorov bound on scalar Brownian paths, for which
    ``E |B_t - B_s|^q`` is known in closed form."""

    target = paths.KOLMOGOROV

    def handle(self, run: JobRun) -> ExitCode:
        k = self.config.kolmogorov
        samples = brownian_paths(k.paths, k.depth, k.T, self.job.master_seed)
        report = check_kolmogorov(samples, k.C, k.q, k.xi, k.eta, k.T)
        self.write_model(paths.KOLMOGOROV, report)
        return ExitCode.PASS if report.passed else ExitCode.CHECK_FAILED
