"""Operator calculus in the sine eigenbasis.

Every operator of the Dirichlet problem is diagonal here: the semigroup
``S(t)`` multiplies mode j by ``exp(-lambda_j t)``, fractional powers
``A^alpha`` by ``lambda_j^alpha``. Functions accept batched fields and return
arrays of norms for batched input, plain floats otherwise.
"""

import numpy as np

from spdelab.exceptions import InvalidDimensionError
from spdelab.model.basis import Field, SpectralBasis, min_grid_size


def _scalar(value: np.ndarray) -> np.ndarray | float:
    if np.ndim(value) == 0:
        return float(value)
    return value


def _check_field(b: SpectralBasis, u: Field) -> None:
    if u.basis_id != b.key:
        raise InvalidDimensionError(f"Basis mismatch: `{u.basis_id}` vs `{b.key}`")


def build_basis(L: float, a0: float, N: int, G: int | None = None) -> SpectralBasis:
    """Build the Dirichlet sine basis.

    Args:
        L: Domain length
        a0: Diffusion coefficient
        N: Mode count
        G: Grid size, defaults to the dealiasing minimum ``ceil(3N/2)``

    Raises:
        InvalidDimensionError: If ``G < ceil(3N/2)``
    """
    if N < 1:
        raise InvalidDimensionError(f"Mode count must be >= 1, got {N}")
    if G is None:
        G = min_grid_size(N)
    if G < min_grid_size(N):
        raise InvalidDimensionError(
            f"Grid size G={G} < ceil(3N/2)={min_grid_size(N)}: "
            "aliasing unsafe for cubic nonlinearities"
        )
    if L <= 0 or a0 <= 0:
        raise ValueError(f"L and a0 must be positive, got L={L}, a0={a0}")
    return SpectralBasis(L=L, a0=a0, N=N, G=G)


def to_spectral(b: SpectralBasis, values: np.ndarray) -> np.ndarray:
    return b.to_spectral(values)


def to_grid(b: SpectralBasis, coeffs: np.ndarray) -> np.ndarray:
    return b.to_grid(coeffs)


def semigroup_multiplier(b: SpectralBasis, t: float) -> np.ndarray:
    if t < 0:
        raise ValueError(f"Semigroup time must be >= 0, got {t}")
    return np.exp(-b.lam * t)


def apply_semigroup(b: SpectralBasis, t: float, u: Field) -> Field:
    """``S(t) u``: mode j scaled by ``exp(-lambda_j t)``."""
    _check_field(b, u)
    return Field.from_coeffs(b, semigroup_multiplier(b, t) * u.coeffs)


def apply_fractional(b: SpectralBasis, alpha: float, u: Field) -> Field:
    """``A^alpha u``: mode j scaled by ``lambda_j^alpha`` (any real alpha)."""
    _check_field(b, u)
    return Field.from_coeffs(b, b.lam**alpha * u.coeffs)


def lq_norm(b: SpectralBasis, u: Field, q: float) -> np.ndarray | float:
    """Discrete ``||u||_{L^q}`` with the rectangle rule on the interior grid
    (equal to the trapezoid rule, the field vanishes at both endpoints)."""
    if q < 1:
        raise ValueError(f"L^q norm needs q >= 1, got {q}")
    _check_field(b, u)
    total = np.sum(np.abs(u.values) ** q, axis=-1) * b.dx
    return _scalar(total ** (1 / q))


def lq_moment(b: SpectralBasis, u: Field, q: float) -> np.ndarray | float:
    """``||u||_{L^q}^q`` without the root (avoids a pow/root round trip)."""
    if q < 1:
        raise ValueError(f"L^q norm needs q >= 1, got {q}")
    _check_field(b, u)
    return _scalar(np.sum(np.abs(u.values) ** q, axis=-1) * b.dx)


def sup_norm(b: SpectralBasis, u: Field) -> np.ndarray | float:
    """``||u||_{C_0}`` from grid samples, refined by a quadratic fit through
    the discrete maximiser and its two neighbours (boundary zeros included)."""
    _check_field(b, u)
    values = np.abs(u.values)
    padded = np.zeros(values.shape[:-1] + (b.G + 2,))
    padded[..., 1:-1] = values
    k = np.argmax(padded, axis=-1)[..., None]
    left = np.take_along_axis(padded, np.maximum(k - 1, 0), axis=-1)[..., 0]
    mid = np.take_along_axis(padded, k, axis=-1)[..., 0]
    right = np.take_along_axis(padded, np.minimum(k + 1, b.G + 1), axis=-1)[..., 0]
    curvature = left - 2 * mid + right
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = np.where(curvature < 0, (left - right) / (2 * curvature), 0.0)
    offset = np.clip(offset, -1.0, 1.0)
    peak = np.maximum(mid - (left - right) * offset / 4, mid)
    return _scalar(peak)


def semigroup_operator_bound(b: SpectralBasis, alpha: float, t: float) -> float:
    """Exact discrete operator norm ``max_j lambda_j^alpha exp(-lambda_j t)``
    of ``A^alpha S(t)``."""
    if t <= 0:
        raise ValueError(f"Smoothing bound needs t > 0, got {t}")
    if not 0 <= alpha <= 1:
        raise ValueError(f"Smoothing exponent must lie in [0, 1], got {alpha}")
    return float(np.max(b.lam**alpha * np.exp(-b.lam * t)))


def smoothing_constant(b: SpectralBasis, alpha: float, gap: float = 0.0) -> float:
    """Constant C with ``t^alpha ||A^alpha S(t)|| e^{gap t} <= C`` for all t > 0.

    Without gap this is ``alpha^alpha e^{-alpha}``. With ``0 <= gap <
    lambda_1``, ``lambda_j <= lambda_1 / (lambda_1 - gap) * (lambda_j - gap)``
    inflates it by ``(lambda_1 / (lambda_1 - gap))^alpha``.
    """
    lam1 = float(b.lam[0])
    if not 0 <= gap < lam1:
        raise ValueError(f"Gap must lie in [0, lambda_1={lam1}), got {gap}")
    if alpha == 0:
        return 1.0
    return (lam1 / (lam1 - gap)) ** alpha * alpha**alpha * np.exp(-alpha)
