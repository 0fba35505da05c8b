"""Polynomial nonlinearities and their hypothesis certificates."""

from enum import StrEnum
from functools import cached_property
from typing import Self

import numpy as np
from anystore.model import BaseModel
from numpy.polynomial import polynomial as P
from pydantic import ConfigDict, PositiveFloat, model_validator


def cutoff_chi(radius_n: float, s: np.ndarray | float) -> np.ndarray | float:
    """Smooth cutoff, 1 on ``[0, n]``, 0 on ``[2n, inf)``.

    ``chi_n(s) = h((2n - s) / n)`` with ``h(x) = phi(x) / (phi(x) + phi(1 - x))``
    and ``phi(x) = exp(-1/x)`` for ``x > 0``, else 0.
    """
    if radius_n <= 0:
        raise ValueError(f"Cutoff radius must be > 0, got {radius_n}")
    x = (2 * radius_n - np.asarray(s, dtype=float)) / radius_n
    with np.errstate(divide="ignore", over="ignore"):
        phi = np.where(x > 0, np.exp(-1 / np.where(x > 0, x, 1)), 0.0)
        y = 1 - x
        phi_c = np.where(y > 0, np.exp(-1 / np.where(y > 0, y, 1)), 0.0)
    weight = phi / (phi + phi_c)
    if np.ndim(weight) == 0:
        return float(weight)
    return weight


class PolyModel(BaseModel):
    """Drift ``f(u) = sum_j b_j u |u|^(j-1)`` (j = 1..beta) and polynomial
    diffusion ``sigma(u) = sum_k s_k u^k``.

    ``r`` defaults to ``max(beta, gamma)``; a smaller value would leave the
    growth constant c3 unbounded and is rejected.
    """

    model_config = ConfigDict(frozen=True)

    f_coeffs: list[float] = []
    """``b_1 .. b_beta``"""
    sigma_coeffs: list[float] = []
    """``s_0 .. s_gamma`` (lowest order first)"""
    r: int | None = None
    cutoff_n: PositiveFloat | None = None

    @model_validator(mode="after")
    def check_growth(self) -> Self:
        growth = max(self.beta, self.gamma, 1)
        if self.r is None:
            object.__setattr__(self, "r", growth)
        elif self.r < growth:
            raise ValueError(
                f"Growth exponent r={self.r} < max(beta, gamma)={growth}"
            )
        return self

    @cached_property
    def b(self) -> np.ndarray:
        return P.polytrim(np.asarray(self.f_coeffs or [0.0], dtype=float))

    @cached_property
    def s(self) -> np.ndarray:
        return P.polytrim(np.asarray(self.sigma_coeffs or [0.0], dtype=float))

    @property
    def beta(self) -> int:
        b = P.polytrim(np.asarray(self.f_coeffs or [0.0], dtype=float))
        return 0 if len(b) == 1 and b[0] == 0 else len(b)

    @property
    def gamma(self) -> int:
        s = P.polytrim(np.asarray(self.sigma_coeffs or [0.0], dtype=float))
        return len(s) - 1

    @property
    def example_ex1(self) -> bool:
        """Structural conditions of the canonical superlinear example:
        ``b_beta < 0``, ``gamma >= 1`` and ``beta + 1 > 2 gamma``."""
        return (
            self.beta > 0
            and self.b[-1] < 0
            and self.gamma >= 1
            and self.beta + 1 > 2 * self.gamma
        )

    @property
    def is_zero(self) -> bool:
        return self.beta == 0 and not np.any(self.s)

    def f(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        absu = np.abs(u)
        for j, bj in enumerate(self.f_coeffs, start=1):
            if bj:
                out = out + bj * u * absu ** (j - 1)
        return out

    def df(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        absu = np.abs(u)
        for j, bj in enumerate(self.f_coeffs, start=1):
            if bj:
                out = out + j * bj * absu ** (j - 1)
        return out

    def sigma(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return P.polyval(u, self.s) * np.ones_like(u)

    def dsigma(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return P.polyval(u, P.polyder(self.s)) * np.ones_like(u)

    def f_n(self, u: np.ndarray) -> np.ndarray:
        """Scalar truncation ``chi_n(|u|) f(u)``; identical to ``f`` without
        cutoff."""
        if self.cutoff_n is None:
            return self.f(u)
        return cutoff_chi(self.cutoff_n, np.abs(u)) * self.f(u)

    def sigma_n(self, u: np.ndarray) -> np.ndarray:
        if self.cutoff_n is None:
            return self.sigma(u)
        return cutoff_chi(self.cutoff_n, np.abs(u)) * self.sigma(u)

    def with_cutoff(self, n: float | None) -> "PolyModel":
        return PolyModel(
            f_coeffs=self.f_coeffs, sigma_coeffs=self.sigma_coeffs, r=self.r, cutoff_n=n
        )


class Status(StrEnum):
    VERIFIED = "verified"
    FALSIFIED = "falsified"
    GRID_ONLY = "grid-verified-only"


class Witness(BaseModel):
    """Point attaining a certified constant: ``u`` (and ``v`` for two-point
    conditions) plus the quotient or function value there."""

    constant: str
    u: float
    v: float | None = None
    value: float


class HypothesisCertificate(BaseModel):
    """Constants of the coercivity (H2) and one-sided Lipschitz (H3)
    conditions for a given moment exponent and noise trace."""

    q: float
    r: int
    theta: float
    c1: float | None = None
    c2: float | None = None
    c3: float | None = None
    c4: float | None = None
    c5: float | None = None
    leading_coefficient: float | None = None
    """Leading coefficient of ``f(u)u + (qr^2-1) Theta sigma(u)^2``."""
    example_ex1: bool = False
    witnesses: list[Witness] = []
    status: dict[str, Status] = {}

    @property
    def noise_weight(self) -> float:
        """``K = (q r^2 - 1) Theta``"""
        return (self.q * self.r**2 - 1) * self.theta

    @property
    def verified(self) -> bool:
        return self.status.get("H2") == Status.VERIFIED

    @property
    def falsified(self) -> bool:
        return Status.FALSIFIED in self.status.values()

    def passes(self, allow_grid: bool = False) -> bool:
        """All hypotheses verified, or grid-verified when allowed."""
        accepted = {Status.VERIFIED}
        if allow_grid:
            accepted.add(Status.GRID_ONLY)
        return bool(self.status) and all(s in accepted for s in self.status.values())

    def witness(self, constant: str) -> Witness | None:
        for w in self.witnesses:
            if w.constant == constant:
                return w
        return None

    def merge(self, other: "HypothesisCertificate") -> "HypothesisCertificate":
        data = self.model_dump()
        for key in ("c1", "c2", "c3", "c4", "c5", "leading_coefficient"):
            if data[key] is None:
                data[key] = getattr(other, key)
        data["witnesses"] = [*self.witnesses, *other.witnesses]
        data["status"] = {**self.status, **other.status}
        return HypothesisCertificate(**data)
