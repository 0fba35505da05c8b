"""Moment estimates and bound check reports."""

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Generator

import numpy as np
from anystore.model import BaseModel

from spdelab.exceptions import MissingMomentError
from spdelab.model.poly import HypothesisCertificate

C0 = "c0"
LRHO = "lrho"
H1 = "h1"


class MomentRow(BaseModel):
    """One CSV row: estimate of a moment at one time."""

    t: float
    norm_id: str
    rho: float
    estimate: float
    stderr: float


@dataclass
class MomentSeries:
    """Monte Carlo estimates over recorded times.

    ``m_c0_q`` estimates ``E ||u(t)||_C0^q``, ``m_lrho_rho[rho]`` estimates
    ``E ||u(t)||_L^rho^rho`` and ``m_h1_q`` estimates
    ``E ||A^(1/2) u(t)||_L^q^q``; every estimate carries the standard error
    ``std / sqrt(M)`` of its time point.
    """

    times: np.ndarray
    q: float
    M: int
    m_c0_q: np.ndarray
    m_c0_q_se: np.ndarray
    m_lrho_rho: dict[float, np.ndarray] = field(default_factory=dict)
    m_lrho_rho_se: dict[float, np.ndarray] = field(default_factory=dict)
    m_h1_q: np.ndarray | None = None
    m_h1_q_se: np.ndarray | None = None

    def lrho(self, rho: float) -> tuple[np.ndarray, np.ndarray]:
        for key, values in self.m_lrho_rho.items():
            if np.isclose(key, rho):
                return values, self.m_lrho_rho_se[key]
        raise MissingMomentError(f"No L^rho moment for rho={rho}")

    def h1(self) -> tuple[np.ndarray, np.ndarray]:
        if self.m_h1_q is None or self.m_h1_q_se is None:
            raise MissingMomentError("No H^1 moments in series")
        return self.m_h1_q, self.m_h1_q_se

    def rows(self) -> Generator[MomentRow, None, None]:
        """Rows ordered by time, then norm (``c0``, ``lrho`` by rho, ``h1``)."""
        for i, t in enumerate(self.times):
            t = float(t)
            yield MomentRow(
                t=t,
                norm_id=C0,
                rho=self.q,
                estimate=float(self.m_c0_q[i]),
                stderr=float(self.m_c0_q_se[i]),
            )
            for rho in sorted(self.m_lrho_rho):
                yield MomentRow(
                    t=t,
                    norm_id=LRHO,
                    rho=rho,
                    estimate=float(self.m_lrho_rho[rho][i]),
                    stderr=float(self.m_lrho_rho_se[rho][i]),
                )
            if self.m_h1_q is not None and self.m_h1_q_se is not None:
                yield MomentRow(
                    t=t,
                    norm_id=H1,
                    rho=self.q,
                    estimate=float(self.m_h1_q[i]),
                    stderr=float(self.m_h1_q_se[i]),
                )


class Verdict(StrEnum):
    PASS = "pass"
    FAIL = "fail"


class BoundReport(BaseModel):
    """Comparison of an estimated quantity (``lhs``) with a bound (``rhs``).

    Unless a check decides otherwise, the verdict passes iff
    ``lhs <= rhs + 2 stderr`` at every time.
    """

    bound_name: str
    times: list[float]
    lhs: list[float]
    rhs: list[float]
    stderr: list[float]
    margin: float
    verdict: Verdict
    qualifier: str = "2-stderr CI"
    constants: dict[str, float | None] = {}

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    @classmethod
    def make(
        cls,
        bound_name: str,
        times: np.ndarray,
        lhs: np.ndarray,
        rhs: np.ndarray,
        stderr: np.ndarray | None = None,
        verdict: bool | None = None,
        **constants: float | None,
    ) -> "BoundReport":
        lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
        rhs = np.broadcast_to(np.asarray(rhs, dtype=float), lhs.shape)
        se = np.zeros_like(lhs) if stderr is None else np.atleast_1d(stderr)
        if verdict is None:
            verdict = bool(np.all(lhs <= rhs + 2 * se))
        return cls(
            bound_name=bound_name,
            times=np.atleast_1d(times).astype(float).tolist(),
            lhs=lhs.tolist(),
            rhs=rhs.tolist(),
            stderr=se.astype(float).tolist(),
            margin=float(np.min(rhs - lhs)) if lhs.size else float("inf"),
            verdict=Verdict.PASS if verdict else Verdict.FAIL,
            constants={k: None if v is None else float(v) for k, v in constants.items()},
        )


class SimulationReport(BaseModel):
    """All bound checks of one ensemble run."""

    experiment: str
    master_seed: int
    paths: int
    hits: int = 0
    """Paths stopped at ``tau_n``."""
    blown_up: int = 0
    certificate: HypothesisCertificate | None = None
    reports: list[BoundReport] = []

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)
