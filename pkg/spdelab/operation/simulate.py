import numpy as np
from anystore.io import smart_write_models
from anystore.util import join_uri

from spdelab.core import paths
from spdelab.logic.basis import lq_moment
from spdelab.logic.bounds import (
    check_dissipativity,
    check_energy_inequality,
    check_kolmogorov,
    regularity_probe,
)
from spdelab.logic.certify import certify_H2
from spdelab.logic.ensemble import run_ensemble
from spdelab.logic.holder import increment_constant
from spdelab.logic.moments import estimate_moments
from spdelab.model.experiment import CheckName
from spdelab.model.job import ExitCode, SimulateJob
from spdelab.model.path import EnsembleResult
from spdelab.model.poly import HypothesisCertificate
from spdelab.model.probe import BoundReport, MomentSeries, SimulationReport
from spdelab.operation.base import ExperimentOperation
from spdelab.repository.job import JobRun


class SimulateOperation(ExperimentOperation[SimulateJob]):
    """
    Integrate the ensemble, write the moment series as CSV and run the
    configured bound checks on it.
    """

    target = paths.MOMENTS

    def unverified(self, name: str) -> BoundReport:
        report = BoundReport.make(name, [], [], [], verdict=False)
        report.qualifier = "coercivity not verified"
        self.log.error("Check needs a verified certificate", check=name)
        return report

    def checks(
        self,
        ensemble: EnsembleResult,
        series: MomentSeries,
        cert: HypothesisCertificate,
    ) -> list[BoundReport]:
        b, u0 = self.basis, self.u0
        q, r = self.config.model.q, self.model.r
        reports: list[BoundReport] = []
        for check in self.config.checks:
            if check == CheckName.energy:
                for rho in self.config.rho_list(r):
                    if not cert.verified:
                        reports.append(self.unverified(f"energy_L{rho:g}"))
                        continue
                    u0_moment = float(lq_moment(b, u0, rho))
                    reports.append(
                        check_energy_inequality(series, cert, rho, u0_moment, b.L)
                    )
            elif check == CheckName.dissipativity:
                if not cert.verified:
                    reports.append(self.unverified("dissipativity"))
                    continue
                u0_qr = float(lq_moment(b, u0, q * r))
                reports.append(check_dissipativity(series, cert, q, r, u0_qr))
            elif check == CheckName.regularity:
                reports.append(regularity_probe(series))
            elif check == CheckName.kolmogorov:
                k, T = self.config.kolmogorov, self.config.stepper.T
                values = ensemble.states.values
                C = increment_constant(values, k.q, k.xi, T, grid=True)
                report = check_kolmogorov(values, C, k.q, k.xi, k.eta, T, grid=True)
                report.constants["C"] = C
                report.qualifier = "increment constant fitted on the ensemble"
                reports.append(report)
        return reports

    def handle(self, run: JobRun) -> ExitCode:
        cert = certify_H2(self.model, self.config.model.q, self.noise.theta_m)
        ensemble = run_ensemble(
            self.config.stepper,
            self.basis,
            self.model,
            self.noise,
            self.u0,
            self.job.paths,
            master_seed=self.job.master_seed,
        )
        run.save()
        series = estimate_moments(
            ensemble,
            self.config.model.q,
            self.config.rho_list(self.model.r),
            h1=CheckName.regularity in self.config.checks,
        )
        smart_write_models(
            join_uri(self.uri, paths.MOMENTS), series.rows(), output_format="csv"
        )
        self.job.artifacts.append(paths.MOMENTS)

        summary = SimulationReport(
            experiment=self.config.name,
            master_seed=self.job.master_seed,
            paths=self.job.paths,
            hits=ensemble.hits,
            blown_up=int(np.sum(ensemble.blown_up)),
            certificate=cert,
            reports=self.checks(ensemble, series, cert),
        )
        self.write_model(paths.REPORTS, summary)
        for report in summary.reports:
            self.log.info(
                "Check",
                bound=report.bound_name,
                verdict=str(report.verdict),
                margin=report.margin,
            )
        return ExitCode.PASS if summary.passed else ExitCode.CHECK_FAILED
