from spdelab.core import paths
from spdelab.logic.certify import audit_coercivity, certify, certify_H2
from spdelab.model.job import CertifyJob, ExitCode
from spdelab.model.poly import HypothesisCertificate
from spdelab.operation.base import ExperimentOperation
from spdelab.repository.job import JobRun

AUDIT_TOLERANCE = 1e-8


class CertifyOperation(ExperimentOperation[CertifyJob]):
    """
    Certify the coercivity condition (and, with `allow_grid`, the one-sided
    Lipschitz conditions, which can only be grid-verified) for the configured
    model and the trace of the applied noise schedule.
    """

    target = paths.CERTIFICATE

    def certificate(self) -> HypothesisCertificate:
        q = self.config.model.q
        theta = self.noise.theta_m
        if self.job.allow_grid:
            return certify(self.model, q, theta, R=self.config.model.audit_radius)
        return certify_H2(self.model, q, theta)

    def handle(self, run: JobRun) -> ExitCode:
        cert = self.certificate()
        if cert.verified:
            residual = audit_coercivity(self.model, cert, self.config.model.audit_radius)
            if residual > AUDIT_TOLERANCE * max(1.0, abs(cert.c2 or 0)):
                self.log.warning("Coercivity audit residual", residual=residual)
            self.log.info("Coercivity audit", residual=residual)
        self.write_model(paths.CERTIFICATE, cert)
        self.log.info(
            "Certificate",
            status={k: str(v) for k, v in cert.status.items()},
            c1=cert.c1,
            c2=cert.c2,
        )
        if cert.passes(self.job.allow_grid):
            return ExitCode.PASS
        return ExitCode.FALSIFIED
