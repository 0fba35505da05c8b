"""Trace-class Wiener noise ``W(t, x) = sum_j sqrt(mu_j) e_j(x) B_j(t)``."""

from functools import cached_property
from typing import Annotated, Literal, Self

import numpy as np
from anystore.model import BaseModel
from pydantic import ConfigDict, Field, NonNegativeInt, PrivateAttr, model_validator
from scipy import special

from spdelab.core.settings import Settings

settings = Settings()


class PowerFamily(BaseModel):
    """``mu_j = c * j^(-s)``; ``s > 1`` keeps the trace finite."""

    type: Literal["power"] = "power"
    c: float = 1.0
    s: float = 2.0

    @model_validator(mode="after")
    def check_trace(self) -> Self:
        if self.c < 0:
            raise ValueError(f"Noise amplitude must be >= 0, got c={self.c}")
        if self.c > 0 and self.s <= 1:
            raise ValueError(
                f"Power family with s={self.s} <= 1 has infinite trace "
                "(space-time white noise is not supported)"
            )
        return self

    def values(self, count: int) -> np.ndarray:
        return self.c * np.arange(1, count + 1, dtype=float) ** -self.s

    def tail(self, count: int) -> float:
        """``sum_{j > count} mu_j``."""
        if self.c == 0:
            return 0.0
        return float(self.c * special.zeta(self.s, count + 1))


class ListFamily(BaseModel):
    """Explicit eigenvalue list; modes beyond the list carry no noise."""

    type: Literal["list"] = "list"
    values_: list[float] = Field(alias="values")

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def check_values(self) -> Self:
        if any(v < 0 for v in self.values_):
            raise ValueError("Noise eigenvalues must be >= 0")
        return self

    def values(self, count: int) -> np.ndarray:
        out = np.zeros(count)
        head = self.values_[:count]
        out[: len(head)] = head
        return out

    def tail(self, count: int) -> float:
        return float(sum(self.values_[count:]))


NoiseFamily = Annotated[PowerFamily | ListFamily, Field(discriminator="type")]


class NoiseSpec(BaseModel):
    """Eigenvalues of the Wiener covariance on a given basis.

    ``mu`` is the family's sequence cut at the basis size; when a truncation
    schedule index ``truncation_m`` is set, the noise actually sampled uses
    ``effective_mu``:

        mu_jm = mu_j                    if lambda_j <= 1
        mu_jm = lambda_j^(-1/m) mu_j    if lambda_j > 1
    """

    model_config = ConfigDict(frozen=True)

    family: NoiseFamily
    mu: list[float]
    lam: list[float]
    """Basis eigenvalues the schedule is evaluated on."""
    e_sup2: float
    """``||e_j||_{C_0}^2`` (the same for every sine mode)."""
    delta: float = 0.5
    """Exponent of the weighted trace ``theta_delta`` when no schedule is set."""
    truncation_m: NonNegativeInt | None = None
    tail_theta: float = 0.0
    """``sum_{j > N} mu_j ||e_j||^2``: the part of the trace the basis drops."""

    @model_validator(mode="after")
    def check_mu(self) -> Self:
        if any(m < 0 for m in self.mu):
            raise ValueError("Noise eigenvalues must be >= 0")
        if len(self.mu) != len(self.lam):
            raise ValueError("Noise eigenvalues and basis eigenvalues differ in length")
        if self.truncation_m is not None and self.truncation_m < 1:
            raise ValueError(f"Truncation index must be >= 1, got {self.truncation_m}")
        return self

    @cached_property
    def mu_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)

    @cached_property
    def lam_array(self) -> np.ndarray:
        return np.asarray(self.lam, dtype=float)

    def schedule(self, m: int) -> np.ndarray:
        """``mu_jm`` for schedule index ``m``."""
        if m < 1:
            raise ValueError(f"Truncation index must be >= 1, got {m}")
        lam = self.lam_array
        return np.where(lam <= 1, self.mu_array, lam ** (-1 / m) * self.mu_array)

    @cached_property
    def effective_mu(self) -> np.ndarray:
        if self.truncation_m is None:
            return self.mu_array
        return self.schedule(self.truncation_m)

    @property
    def effective_delta(self) -> float:
        if self.truncation_m is None:
            return self.delta
        return 1 / self.truncation_m

    @property
    def theta(self) -> float:
        """``Theta = sum_j mu_j ||e_j||^2`` of the untruncated sequence."""
        return float(np.sum(self.mu_array) * self.e_sup2)

    @property
    def theta_m(self) -> float:
        """Trace of the noise actually sampled (``Theta_m <= Theta``)."""
        return float(np.sum(self.effective_mu) * self.e_sup2)

    @property
    def theta_delta(self) -> float:
        """``Theta' = sum_j lambda_j^delta mu_jm ||e_j||^2``."""
        weights = self.lam_array**self.effective_delta
        return float(np.sum(weights * self.effective_mu) * self.e_sup2)

    @property
    def omega(self) -> float:
        """``sum_j mu_j^2 ||e_j||_{C_0}``, the trace assumed by the globally
        Lipschitz existence result."""
        return float(np.sum(self.effective_mu**2) * np.sqrt(self.e_sup2))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.effective_mu)


class RngStream(BaseModel):
    """Counter-based normal stream of one ensemble path.

    Normals for step ``k`` come from a Philox generator keyed by
    ``(master_seed, path_index)`` with its counter positioned at block
    ``k // block_steps``, so any step of any path can be regenerated without
    replaying the ones before it, and streams never share state.
    """

    master_seed: NonNegativeInt = 0
    path_index: NonNegativeInt = 0
    step_counter: NonNegativeInt = 0
    block_steps: int = settings.rng_block_steps

    _block: tuple[int, int, np.ndarray] | None = PrivateAttr(default=None)

    @cached_property
    def key(self) -> np.ndarray:
        return path_key(self.master_seed, self.path_index)

    def normals(self, n: int) -> np.ndarray:
        """Standard normals for the current step, then advance the counter."""
        block, row = divmod(self.step_counter, self.block_steps)
        if self._block is None or self._block[:2] != (block, n):
            self._block = (block, n, block_normals(self.key, block, n, self.block_steps))
        self.step_counter += 1
        return self._block[2][row].copy()

    def replay(self) -> "RngStream":
        """A fresh stream positioned at step 0 of the same path."""
        return RngStream(
            master_seed=self.master_seed,
            path_index=self.path_index,
            block_steps=self.block_steps,
        )


def path_key(master_seed: int, path_index: int) -> np.ndarray:
    """128-bit Philox key of a path, hashed from ``(master_seed, path_index)``."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(path_index,))
    return seq.generate_state(2, dtype=np.uint64)


def block_normals(key: np.ndarray, block: int, n: int, block_steps: int) -> np.ndarray:
    """``(block_steps, n)`` standard normals of one counter block.

    The block index sits in the second counter word; drawing a block only
    advances the first word, so blocks never overlap.
    """
    bitgen = np.random.Philox(key=key, counter=block << 64)
    return np.random.Generator(bitgen).standard_normal((block_steps, n))
