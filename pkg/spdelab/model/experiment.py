"""Experiment configuration, parsed from yaml.

Example:
    ```yaml
    name: allen-cahn
    basis: {L: 1.0, a0: 1.0, N: 64}
    noise:
      family: {type: power, c: 0.1, s: 2}
    model:
      f_coeffs: [1.0, 0.0, -1.0]
      sigma_coeffs: [0.0, 0.25]
      q: 8
    stepper: {scheme: tamed_explicit, dt: 5.0e-4, T: 5.0, record_every: 100}
    ensemble: {paths: 2000, master_seed: 0}
    initial: {1: 2.0}
    checks: [energy, dissipativity, regularity]
    ```
"""

from enum import StrEnum
from typing import Self

import numpy as np
from anystore.model import BaseModel
from banal import ensure_list
from pydantic import Field, PositiveFloat, PositiveInt, field_validator, model_validator

from spdelab.logic.basis import build_basis
from spdelab.logic.noise import build_noise
from spdelab.model.basis import Field as StateField
from spdelab.model.basis import SpectralBasis, min_grid_size
from spdelab.model.noise import NoiseFamily, NoiseSpec, PowerFamily
from spdelab.model.path import Scheme, StepperConfig
from spdelab.model.poly import PolyModel


class CheckName(StrEnum):
    energy = "energy"
    dissipativity = "dissipativity"
    regularity = "regularity"
    kolmogorov = "kolmogorov"


class BasisConfig(BaseModel):
    L: PositiveFloat = 1.0
    a0: PositiveFloat = 1.0
    N: PositiveInt = 64
    G: PositiveInt | None = None

    @model_validator(mode="after")
    def check_grid(self) -> Self:
        if self.G is not None and self.G < min_grid_size(self.N):
            raise ValueError(
                f"Grid size G={self.G} < ceil(3N/2)={min_grid_size(self.N)}"
            )
        return self


class NoiseConfig(BaseModel):
    family: NoiseFamily = PowerFamily(c=0.1, s=2.0)
    delta: float = 0.5
    truncation_m: PositiveInt | None = None


class ModelConfig(BaseModel):
    f_coeffs: list[float] = [1.0, 0.0, -1.0]
    sigma_coeffs: list[float] = [0.0, 0.25]
    r: PositiveInt | None = None
    cutoff_n: PositiveFloat | None = None
    q: float = 8.0
    rho_list: list[float] | None = None
    """Energy exponents, default ``(q, q r)``."""
    audit_radius: PositiveFloat = 4.0

    @model_validator(mode="after")
    def check_q(self) -> Self:
        if self.q <= 6:
            raise ValueError(f"Moment exponent must satisfy q > 6, got {self.q}")
        return self


class EnsembleConfig(BaseModel):
    paths: PositiveInt = 100
    master_seed: int = Field(default=0, ge=0)


class PicardConfig(BaseModel):
    T0: PositiveFloat | None = None
    """Horizon of the Picard run, default the contraction budget (at least
    one step)."""
    dt: PositiveFloat = 1e-3
    scheme: Scheme = Scheme.exponential_euler
    tol: PositiveFloat = 1e-12
    max_iter: PositiveInt = 50
    alpha: float = 0.2
    gamma: float = 0.2
    xi_prime: float = 2.0
    max_horizon: PositiveFloat = 64.0
    path_index: int = Field(default=0, ge=0)


class KolmogorovConfig(BaseModel):
    """Kolmogorov check parameters (``E |B_t - B_s|^4 = 3 |t - s|^2`` for the
    Brownian self-test).

    ``C`` is used by the self-test only; the check on simulated states fits
    its constant on the ensemble.
    """

    C: float = 3.0
    q: float = 4.0
    xi: float = 2.0
    eta: float = 0.125
    T: PositiveFloat = 1.0
    depth: PositiveInt = 10
    paths: PositiveInt = 1000


class ExperimentConfig(BaseModel):
    name: str = "experiment"
    basis: BasisConfig = BasisConfig()
    noise: NoiseConfig = NoiseConfig()
    model: ModelConfig = ModelConfig()
    stepper: StepperConfig = StepperConfig()
    ensemble: EnsembleConfig = EnsembleConfig()
    initial: dict[int, float] = {1: 2.0}
    """Initial state as mode amplitudes, ``u0 = sum_j a_j e_j``."""
    checks: list[CheckName] = []
    picard: PicardConfig = PicardConfig()
    kolmogorov: KolmogorovConfig = KolmogorovConfig()
    output_dir: str = "out"

    @field_validator("checks", mode="before")
    @classmethod
    def ensure_checks(cls, value):
        return ensure_list(value)

    @model_validator(mode="after")
    def check_initial(self) -> Self:
        for j in self.initial:
            if not 1 <= j <= self.basis.N:
                raise ValueError(f"Initial mode {j} outside 1..{self.basis.N}")
        return self

    def build_basis(self) -> SpectralBasis:
        return build_basis(self.basis.L, self.basis.a0, self.basis.N, self.basis.G)

    def build_noise(self, b: SpectralBasis) -> NoiseSpec:
        return build_noise(
            self.noise.family, b, self.noise.delta, self.noise.truncation_m
        )

    def build_model(self) -> PolyModel:
        return PolyModel(
            f_coeffs=self.model.f_coeffs,
            sigma_coeffs=self.model.sigma_coeffs,
            r=self.model.r,
            cutoff_n=self.model.cutoff_n,
        )

    def initial_state(self, b: SpectralBasis) -> StateField:
        coeffs = np.zeros(b.N)
        for j, amplitude in self.initial.items():
            coeffs[j - 1] = amplitude
        return StateField.from_coeffs(b, coeffs)

    def rho_list(self, r: int) -> list[float]:
        if self.model.rho_list:
            return self.model.rho_list
        return [self.model.q, self.model.q * r]
