"""Hoelder seminorm estimation on dyadic time grids.

Only neighbouring points of the nested grids ``D_n = {k T 2^-n}`` are
compared, the pairs the chaining argument works with. Skipping the other
pairs can only underestimate the seminorm.
"""

import numpy as np

from spdelab.exceptions import InvalidDimensionError
from spdelab.logic.noise import NoiseStream


def dyadic_depth(samples: int) -> int:
    """Depth ``n`` of a grid with ``2^n + 1`` samples."""
    if samples < 2:
        raise ValueError(f"Hoelder estimate needs at least 2 samples, got {samples}")
    intervals = samples - 1
    if intervals & (intervals - 1):
        raise InvalidDimensionError(
            f"Path has {samples} samples, expected 2^n + 1 on a dyadic grid"
        )
    return intervals.bit_length() - 1


def holder_seminorm(
    path: np.ndarray, eta: float, T: float = 1.0
) -> np.ndarray | float:
    """``K = sup ||v_t - v_s|| / |t - s|^eta`` over the nested dyadic
    neighbour pairs.

    Args:
        path: Scalar samples on ``k T 2^-n``, ``k = 0..2^n``, shape
            ``(samples,)``; a leading axis holds independent paths
        eta: Hoelder exponent
        T: Horizon

    Returns:
        The estimate, one per path for batched input
    """
    path = np.asarray(path, dtype=float)
    return _seminorm(path, eta, T, vector=False)


def holder_seminorm_grid(path: np.ndarray, eta: float, T: float = 1.0) -> np.ndarray | float:
    """`holder_seminorm` for grid states ``(..., samples, G)`` measured in the
    sup norm."""
    return _seminorm(np.asarray(path, dtype=float), eta, T, vector=True)


def _seminorm(path: np.ndarray, eta: float, T: float, vector: bool) -> np.ndarray | float:
    axis = -2 if vector else -1
    depth = dyadic_depth(path.shape[axis])
    best = np.zeros(path.shape[: axis if vector else -1])
    for level in range(depth + 1):
        stride = 2 ** (depth - level)
        points = np.take(path, np.arange(0, path.shape[axis], stride), axis=axis)
        diff = np.abs(np.diff(points, axis=axis))
        if vector:
            diff = diff.max(axis=-1)
        width = T * 2.0**-level
        best = np.maximum(best, diff.max(axis=-1) / width**eta)
    if best.ndim == 0:
        return float(best)
    return best


def increment_constant(
    paths: np.ndarray, q: float, xi: float, T: float = 1.0, grid: bool = False
) -> float:
    """Smallest ``C`` with ``E ||v_t - v_s||^q <= C |t - s|^xi`` over the
    dyadic neighbour pairs, the expectation taken over the leading path axis.

    ``paths`` is ``(paths, 2^n + 1)`` for scalar processes or
    ``(paths, 2^n + 1, G)`` for grid states (``grid=True``, sup norm).
    """
    paths = np.asarray(paths, dtype=float)
    depth = dyadic_depth(paths.shape[1])
    best = 0.0
    for level in range(depth + 1):
        stride = 2 ** (depth - level)
        points = paths[:, ::stride]
        diff = np.abs(np.diff(points, axis=1))
        if grid:
            diff = diff.max(axis=-1)
        moments = np.mean(diff**q, axis=0)
        width = T * 2.0**-level
        best = max(best, float(moments.max()) / width**xi)
    return best


def brownian_paths(
    paths: int, depth: int, T: float = 1.0, master_seed: int = 0
) -> np.ndarray:
    """Scalar Brownian motions sampled on ``k T 2^-depth``, shape
    ``(paths, 2^depth + 1)``, from the counter-based path streams."""
    steps = 2**depth
    dt = T / steps
    stream = NoiseStream(master_seed, range(paths), 1)
    increments = np.stack([stream.normals(k)[:, 0] for k in range(steps)], axis=1)
    out = np.zeros((paths, steps + 1))
    out[:, 1:] = np.cumsum(np.sqrt(dt) * increments, axis=1)
    return out
