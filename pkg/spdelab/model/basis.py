"""Spectral representation of the Dirichlet operator A = -a0 d²/dx² on (0, L).

The eigenpairs are closed form:

    lambda_j = a0 (j pi / L)^2,    e_j(x) = sqrt(2/L) sin(j pi x / L)

and the collocation grid ``x_k = k L / (G + 1)``, ``k = 1..G`` excludes both
endpoints, where every field vanishes. On that grid the sampled sines are
exactly orthonormal under the rectangle rule with ``dx = L / (G + 1)`` (for
``j <= G``), so the transforms between coefficients and grid samples are a
scaled type-I discrete sine transform pair.
"""

from functools import cached_property
from typing import Self

import numpy as np
from anystore.model import BaseModel
from pydantic import ConfigDict, PositiveFloat, PositiveInt, model_validator
from scipy import fft

from spdelab.exceptions import InvalidDimensionError


def min_grid_size(modes: int) -> int:
    """Smallest grid size satisfying the 3/2 dealiasing rule."""
    return -(-3 * modes // 2)


class SpectralBasis(BaseModel):
    """Dirichlet sine basis on ``(0, L)``, immutable after construction."""

    model_config = ConfigDict(frozen=True)

    L: PositiveFloat
    a0: PositiveFloat
    N: PositiveInt
    G: PositiveInt

    @model_validator(mode="after")
    def check_dealiasing(self) -> Self:
        if self.G < min_grid_size(self.N):
            raise InvalidDimensionError(
                f"Grid size G={self.G} < ceil(3N/2)={min_grid_size(self.N)}: "
                "aliasing unsafe for cubic nonlinearities"
            )
        return self

    @property
    def key(self) -> str:
        """Identifier tying fields to this basis."""
        return f"sine:L={self.L!r}:a0={self.a0!r}:N={self.N}:G={self.G}"

    @cached_property
    def modes(self) -> np.ndarray:
        return np.arange(1, self.N + 1)

    @cached_property
    def lam(self) -> np.ndarray:
        """Eigenvalues lambda_1 < ... < lambda_N."""
        return self.a0 * (self.modes * np.pi / self.L) ** 2

    @property
    def lambda_gap(self) -> float:
        """Spectral gap parameter, fixed to lambda_1 / 2."""
        return float(self.lam[0]) / 2

    @cached_property
    def grid(self) -> np.ndarray:
        return np.arange(1, self.G + 1) * self.dx

    @property
    def dx(self) -> float:
        return self.L / (self.G + 1)

    @property
    def supnorm_e(self) -> float:
        """``||e_j||_{C_0}``, the same for every mode."""
        return float(np.sqrt(2 / self.L))

    @cached_property
    def eigenfunctions(self) -> np.ndarray:
        """Sampled eigenfunctions, shape ``(G, N)``."""
        return self.supnorm_e * np.sin(np.outer(self.grid, self.modes) * np.pi / self.L)

    def _check(self, array: np.ndarray, size: int, what: str) -> np.ndarray:
        array = np.asarray(array, dtype=float)
        if array.ndim == 0 or array.shape[-1] != size:
            raise InvalidDimensionError(
                f"{what} must have trailing length {size}, got shape {array.shape}"
            )
        return array

    def to_spectral(self, values: np.ndarray) -> np.ndarray:
        """Grid samples ``(..., G)`` -> coefficients ``(..., N)``."""
        values = self._check(values, self.G, "Grid vector")
        scale = self.dx * self.supnorm_e / 2
        return scale * fft.dst(values, type=1, axis=-1)[..., : self.N]

    def to_grid(self, coeffs: np.ndarray) -> np.ndarray:
        """Coefficients ``(..., N)`` -> grid samples ``(..., G)``."""
        coeffs = self._check(coeffs, self.N, "Coefficient vector")
        padded = np.zeros(coeffs.shape[:-1] + (self.G,))
        padded[..., : self.N] = coeffs
        return self.supnorm_e / 2 * fft.dst(padded, type=1, axis=-1)


class Field:
    """Solution state in dual representation.

    Either representation may be given; the other one is synchronized lazily
    through the basis transforms. Leading axes are batch axes (paths, time
    records), the trailing axis is modes (``coeffs``) or grid points
    (``values``). Fields are values: operations return new fields and never
    mutate their inputs.

    A field built from grid values that are not band-limited keeps those
    values; its coefficients are their projection onto the first N modes.
    """

    __slots__ = ("basis", "_coeffs", "_values")

    def __init__(
        self,
        basis: SpectralBasis,
        coeffs: np.ndarray | None = None,
        values: np.ndarray | None = None,
    ) -> None:
        if coeffs is None and values is None:
            raise ValueError("Field needs coefficients or grid values")
        self.basis = basis
        self._coeffs = None if coeffs is None else basis._check(coeffs, basis.N, "Coefficient vector")
        self._values = None if values is None else basis._check(values, basis.G, "Grid vector")

    @classmethod
    def from_coeffs(cls, basis: SpectralBasis, coeffs: np.ndarray) -> Self:
        return cls(basis, coeffs=coeffs)

    @classmethod
    def from_values(cls, basis: SpectralBasis, values: np.ndarray) -> Self:
        return cls(basis, values=values)

    @classmethod
    def zeros(cls, basis: SpectralBasis, batch: tuple[int, ...] = ()) -> Self:
        return cls(basis, coeffs=np.zeros(batch + (basis.N,)))

    @classmethod
    def mode(cls, basis: SpectralBasis, j: int, amplitude: float = 1.0) -> Self:
        """``amplitude * e_j`` (1-based mode index)."""
        if not 1 <= j <= basis.N:
            raise InvalidDimensionError(f"Mode {j} outside 1..{basis.N}")
        coeffs = np.zeros(basis.N)
        coeffs[j - 1] = amplitude
        return cls(basis, coeffs=coeffs)

    @property
    def basis_id(self) -> str:
        return self.basis.key

    @property
    def coeffs(self) -> np.ndarray:
        if self._coeffs is None:
            self._coeffs = self.basis.to_spectral(self._values)
        return self._coeffs

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            self._values = self.basis.to_grid(self._coeffs)
        return self._values

    @property
    def batch_shape(self) -> tuple[int, ...]:
        if self._coeffs is not None:
            return self._coeffs.shape[:-1]
        return self._values.shape[:-1]

    def __getitem__(self, index) -> "Field":
        return Field(self.basis, coeffs=self.coeffs[index])

    def __len__(self) -> int:
        return self.batch_shape[0] if self.batch_shape else 1

    def _same_basis(self, other: "Field") -> None:
        if other.basis_id != self.basis_id:
            raise InvalidDimensionError(
                f"Basis mismatch: `{self.basis_id}` vs `{other.basis_id}`"
            )

    def __add__(self, other: "Field") -> "Field":
        self._same_basis(other)
        return Field(self.basis, coeffs=self.coeffs + other.coeffs)

    def __sub__(self, other: "Field") -> "Field":
        self._same_basis(other)
        return Field(self.basis, coeffs=self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "Field":
        return Field(self.basis, coeffs=self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return self * -1.0

    def __repr__(self) -> str:
        return f"<Field({self.basis_id}, batch={self.batch_shape})>"
