"""Time stepping configuration and trajectory containers."""

from dataclasses import dataclass, field
from enum import StrEnum
from typing import Self

import numpy as np
from anystore.model import BaseModel
from pydantic import PositiveFloat, PositiveInt, model_validator

from spdelab.model.basis import Field, SpectralBasis


class Scheme(StrEnum):
    semi_implicit = "semi_implicit"
    exponential_euler = "exponential_euler"
    tamed_explicit = "tamed_explicit"


class StepperConfig(BaseModel):
    scheme: Scheme = Scheme.tamed_explicit
    dt: PositiveFloat = 1e-3
    T: PositiveFloat = 1.0
    stop_radius_n: PositiveFloat | None = None
    """Radius of the stopping time ``tau_n``; unset (or ``inf``) never stops."""
    record_every: PositiveInt = 1

    @model_validator(mode="after")
    def check_horizon(self) -> Self:
        if self.T < self.dt * (1 - 1e-9):
            raise ValueError(f"Horizon T={self.T} shorter than one step dt={self.dt}")
        return self

    @property
    def steps(self) -> int:
        return max(1, int(round(self.T / self.dt)))

    @property
    def stops(self) -> bool:
        return self.stop_radius_n is not None and np.isfinite(self.stop_radius_n)

    @property
    def record_steps(self) -> np.ndarray:
        steps = np.arange(0, self.steps + 1, self.record_every)
        if steps[-1] != self.steps:
            steps = np.append(steps, self.steps)
        return steps

    @property
    def times(self) -> np.ndarray:
        return self.record_steps * self.dt


@dataclass
class PathResult:
    """One recorded trajectory, stopped at ``tau_n`` when configured.

    ``tau_n_hit`` is the first step boundary where ``||u||_C0 >= n`` (the
    crossing is resolved to one step; ``tau_n_sup`` is the norm there).
    """

    times: np.ndarray
    states: Field
    sup_history: np.ndarray
    tau_n_hit: float | None = None
    tau_n_sup: float | None = None
    blown_up: bool = False
    path_index: int = 0


@dataclass
class EnsembleResult:
    """Recorded trajectories of many paths in path-index order.

    Coefficients have shape ``(paths, records, N)``; ``tau_n_hit`` is NaN for
    paths that never reached the stopping radius.
    """

    basis: SpectralBasis
    times: np.ndarray
    coeffs: np.ndarray
    sup_history: np.ndarray
    tau_n_hit: np.ndarray
    tau_n_sup: np.ndarray
    blown_up: np.ndarray
    path_indices: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    @property
    def states(self) -> Field:
        return Field.from_coeffs(self.basis, self.coeffs)

    @property
    def hits(self) -> int:
        return int(np.sum(np.isfinite(self.tau_n_hit)))

    def path(self, i: int) -> PathResult:
        tau = self.tau_n_hit[i]
        hit = bool(np.isfinite(tau))
        return PathResult(
            times=self.times,
            states=Field.from_coeffs(self.basis, self.coeffs[i]),
            sup_history=self.sup_history[i],
            tau_n_hit=float(tau) if hit else None,
            tau_n_sup=float(self.tau_n_sup[i]) if hit else None,
            blown_up=bool(self.blown_up[i]),
            path_index=self.path_indices[i] if self.path_indices else i,
        )

    def __iter__(self):
        for i in range(len(self)):
            yield self.path(i)

    @classmethod
    def concat(cls, parts: list["EnsembleResult"]) -> "EnsembleResult":
        first = parts[0]
        return cls(
            basis=first.basis,
            times=first.times,
            coeffs=np.concatenate([p.coeffs for p in parts]),
            sup_history=np.concatenate([p.sup_history for p in parts]),
            tau_n_hit=np.concatenate([p.tau_n_hit for p in parts]),
            tau_n_sup=np.concatenate([p.tau_n_sup for p in parts]),
            blown_up=np.concatenate([p.blown_up for p in parts]),
            path_indices=[i for p in parts for i in p.path_indices],
        )


@dataclass
class PicardResult:
    """Fixed point of the discrete mild-solution map and its iteration log.

    ``distances[k]`` is the sup-in-time ``C_0`` distance of iterates ``k+1``
    and ``k``; ``ratios[k] = distances[k+1] / distances[k]``.
    """

    times: np.ndarray
    trajectory: Field
    distances: list[float]
    ratios: list[float]
    iterations: int
    converged: bool

    @property
    def max_ratio(self) -> float:
        return max(self.ratios) if self.ratios else 0.0

    @property
    def mean_ratio(self) -> float:
        return float(np.mean(self.ratios)) if self.ratios else 0.0


class ContractionReport(BaseModel):
    """Outcome of a Picard contraction experiment."""

    lipschitz: float
    budget_T0: float
    T0: float
    iterations: int
    converged: bool
    distances: list[float]
    ratios: list[float]
    fixed_point_distance: float | None = None
    """Sup distance between the fixed point and the time-stepped path on the
    same noise."""
    empirical_horizon: float | None = None
    passed: bool
