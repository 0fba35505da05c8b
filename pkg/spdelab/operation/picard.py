import numpy as np

from spdelab.core import paths
from spdelab.exceptions import ImproperlyConfigured, NoConvergenceError
from spdelab.logic.basis import sup_norm
from spdelab.logic.certify import truncated_lipschitz
from spdelab.logic.integrate import run_path
from spdelab.logic.picard import (
    contraction_budget,
    empirical_contraction_horizon,
    freeze_increments,
    picard_solve,
)
from spdelab.model.basis import Field
from spdelab.model.job import ExitCode, PicardJob
from spdelab.model.noise import RngStream
from spdelab.model.path import ContractionReport, StepperConfig
from spdelab.operation.base import ExperimentOperation
from spdelab.repository.job import JobRun

FIXED_POINT_TOLERANCE = 1e-6


class PicardOperation(ExperimentOperation[PicardJob]):
    """
    Picard iteration of the truncated equation on one frozen noise path.

    The horizon defaults to the analytic contraction budget. A passing run
    converges with every ratio below 1 and its fixed point matches the
    time-stepped path on the same noise. The empirical contraction horizon
    must also lie strictly beyond the analytic budget.
    """

    target = paths.CONTRACTION

    def handle(self, run: JobRun) -> ExitCode:
        pc = self.config.picard
        b, m, spec, u0 = self.basis, self.model, self.noise, self.u0
        if m.cutoff_n is None:
            raise ImproperlyConfigured("Picard run needs `model.cutoff_n`")

        lip = truncated_lipschitz(m)
        budget = contraction_budget(
            lip,
            self.config.model.q,
            pc.alpha,
            pc.gamma,
            pc.xi_prime,
            spec.theta_m,
            b.lambda_gap,
            horizon=self.config.stepper.T,
            domain_size=b.L,
        )
        T0 = pc.T0 or max(budget, pc.dt)
        steps = max(1, int(round(T0 / pc.dt)))
        rng = RngStream(master_seed=self.job.master_seed, path_index=pc.path_index)
        frozen = freeze_increments(spec, b, pc.dt, steps, rng)
        try:
            result = picard_solve(
                b, m, spec, u0, frozen, steps * pc.dt, pc.dt, pc.tol, pc.max_iter, pc.scheme
            )
        except NoConvergenceError as e:
            self.log.warning(str(e))
            result = e.result

        cfg = StepperConfig(scheme=pc.scheme, dt=pc.dt, T=steps * pc.dt)
        path = run_path(cfg, b, m, spec, u0, rng.replay())
        diff = Field.from_coeffs(b, result.trajectory.coeffs - path.states.coeffs)
        distance = float(np.max(sup_norm(b, diff)))
        run.save()

        horizon = empirical_contraction_horizon(
            b,
            m,
            spec,
            u0,
            rng,
            pc.dt,
            start=T0,
            max_horizon=pc.max_horizon,
            max_iter=pc.max_iter,
            scheme=pc.scheme,
        )
        contracts = all(r < 1 for r in result.ratios)
        report = ContractionReport(
            lipschitz=lip,
            budget_T0=budget,
            T0=steps * pc.dt,
            iterations=result.iterations,
            converged=result.converged,
            distances=result.distances,
            ratios=result.ratios,
            fixed_point_distance=distance,
            empirical_horizon=horizon,
            passed=result.converged
            and contracts
            and distance < FIXED_POINT_TOLERANCE
            and horizon > budget,
        )
        self.write_model(paths.CONTRACTION, report)
        self.log.info(
            "Contraction",
            budget=budget,
            T0=report.T0,
            max_ratio=result.max_ratio,
            fixed_point_distance=distance,
            empirical_horizon=horizon,
        )
        return ExitCode.PASS if report.passed else ExitCode.CHECK_FAILED
