"""Construction, truncation and sampling of the Q-Wiener noise."""

from typing import Sequence

import numpy as np
from anystore.logging import get_logger
from pydantic import TypeAdapter

from spdelab.core.settings import Settings
from spdelab.exceptions import InvalidDimensionError
from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.noise import (
    NoiseFamily,
    NoiseSpec,
    PowerFamily,
    RngStream,
    block_normals,
    path_key,
)

settings = Settings()
log = get_logger(__name__)

FAMILY = TypeAdapter(NoiseFamily)


def _check_basis(spec: NoiseSpec, b: SpectralBasis) -> None:
    if len(spec.mu) != b.N or not np.allclose(spec.lam_array, b.lam, rtol=1e-14):
        raise InvalidDimensionError("Noise spec was built on another basis")


def build_noise(
    family: NoiseFamily | dict,
    b: SpectralBasis,
    delta: float = 0.5,
    truncation_m: int | None = None,
) -> NoiseSpec:
    """Evaluate a noise family on the first N modes of a basis.

    Args:
        family: `PowerFamily`, `ListFamily` or their config dict
            (``{"type": "power", "c": .., "s": ..}`` / ``{"type": "list",
            "values": [..]}``)
        b: The basis
        delta: Exponent of the weighted trace when no schedule is applied
        truncation_m: Optional schedule index

    Raises:
        ValueError: On negative eigenvalues
    """
    if isinstance(family, dict):
        family = FAMILY.validate_python(family)
    e_sup2 = b.supnorm_e**2
    spec = NoiseSpec(
        family=family,
        mu=family.values(b.N).tolist(),
        lam=b.lam.tolist(),
        e_sup2=e_sup2,
        delta=delta,
        truncation_m=truncation_m,
        tail_theta=family.tail(b.N) * e_sup2,
    )
    log.debug(
        "Built noise",
        family=family.type,
        modes=b.N,
        theta=spec.theta,
        tail_theta=spec.tail_theta,
    )
    return spec


def scale_noise(spec: NoiseSpec, factor: float) -> NoiseSpec:
    """Multiply every eigenvalue by ``factor >= 0`` (a Theta sweep)."""
    if factor < 0:
        raise ValueError(f"Scale factor must be >= 0, got {factor}")
    family = spec.family
    if isinstance(family, PowerFamily):
        family = PowerFamily(c=family.c * factor, s=family.s)
    else:
        family = family.__class__(values=[v * factor for v in family.values_])
    return NoiseSpec(
        family=family,
        mu=(spec.mu_array * factor).tolist(),
        lam=spec.lam,
        e_sup2=spec.e_sup2,
        delta=spec.delta,
        truncation_m=spec.truncation_m,
        tail_theta=spec.tail_theta * factor,
    )


def truncate(spec: NoiseSpec, b: SpectralBasis, m: int) -> NoiseSpec:
    """Apply the schedule ``mu_jm`` with index ``m``; the returned spec has
    ``delta = 1/m``."""
    if m < 1:
        raise ValueError(f"Truncation index must be >= 1, got {m}")
    _check_basis(spec, b)
    return NoiseSpec(
        family=spec.family,
        mu=spec.mu,
        lam=spec.lam,
        e_sup2=spec.e_sup2,
        delta=1 / m,
        truncation_m=m,
        tail_theta=spec.tail_theta,
    )


def theta_mn(spec: NoiseSpec, b: SpectralBasis, m: int, n: int) -> float:
    """``Theta_mn = sum_j |mu_jm - mu_jn| ||e_j||^2``."""
    _check_basis(spec, b)
    if m == n:
        return 0.0
    diff = np.abs(spec.schedule(m) - spec.schedule(n))
    return float(np.sum(diff) * spec.e_sup2)


def sample_increment(
    spec: NoiseSpec, b: SpectralBasis, dt: float, rng: RngStream
) -> Field:
    """One Wiener increment ``dW`` over ``dt`` with coefficients
    ``sqrt(mu_j dt) xi_j``. Advances ``rng`` by one step."""
    if dt <= 0:
        raise ValueError(f"Time step must be > 0, got {dt}")
    _check_basis(spec, b)
    xi = rng.normals(b.N)
    field = Field.from_coeffs(b, np.sqrt(spec.effective_mu * dt) * xi)
    field.values  # synchronize grid representation
    return field


class NoiseStream:
    """Noise of a batch of paths, one row per path.

    Rows are bit-identical to the per-path `RngStream` of the same
    ``(master_seed, path_index)``, so a single path of an ensemble can be
    replayed on its own. One counter block per path is cached at a time.
    """

    def __init__(
        self,
        master_seed: int,
        path_indices: Sequence[int],
        n: int,
        block_steps: int | None = None,
    ) -> None:
        self.master_seed = master_seed
        self.path_indices = list(path_indices)
        self.n = n
        self.block_steps = block_steps or settings.rng_block_steps
        self.keys = [path_key(master_seed, p) for p in self.path_indices]
        self._block: int | None = None
        self._normals: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.path_indices)

    def normals(self, step: int) -> np.ndarray:
        """Standard normals of step ``step`` for every path, shape ``(P, n)``."""
        block, row = divmod(step, self.block_steps)
        if block != self._block:
            self._normals = np.stack(
                [block_normals(k, block, self.n, self.block_steps) for k in self.keys]
            )
            self._block = block
        assert self._normals is not None
        return self._normals[:, row]

    def increments(self, spec: NoiseSpec, dt: float, step: int) -> np.ndarray:
        """Increment coefficients of step ``step``, shape ``(P, N)``."""
        if dt <= 0:
            raise ValueError(f"Time step must be > 0, got {dt}")
        return np.sqrt(spec.effective_mu * dt) * self.normals(step)
