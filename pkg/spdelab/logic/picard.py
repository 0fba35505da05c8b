"""Picard iteration of the discrete mild-solution map and its contraction
budget.

With the noise increments frozen, the map

    Phi(u)_i = P u_{i-1} + Wf f^(u_{i-1}) + Wn [sigma(u_{i-1}) dW_{i-1}]^,
    Phi(u)_0 = u0

uses the diagonal multipliers of the chosen scheme (see
`spdelab.logic.integrate`), so unrolling it gives the discrete convolution
``sum_j P^(i-1-j) (Wf f_j + Wn n_j)`` against ``P^i u0``, and its fixed point
is exactly the time-stepped trajectory on the same increments. The
nonlinear terms of one iterate are evaluated for all times at once.
"""

import numpy as np
from anystore.logging import get_logger
from scipy import special

from spdelab.core.settings import Settings
from spdelab.exceptions import (
    InadmissibleParameterError,
    NoConvergenceError,
)
from spdelab.logic.basis import sup_norm
from spdelab.logic.integrate import Stepper
from spdelab.logic.noise import NoiseStream
from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.noise import NoiseSpec, RngStream
from spdelab.model.path import PicardResult, Scheme, StepperConfig
from spdelab.model.poly import PolyModel

log = get_logger(__name__)


def freeze_increments(
    spec: NoiseSpec, b: SpectralBasis, dt: float, steps: int, rng: RngStream
) -> np.ndarray:
    """Increment coefficients ``(steps, N)`` of ``rng``'s path, starting at
    its current step. ``rng`` is not advanced, so `run_path` with the same
    stream integrates on exactly these increments."""
    stream = NoiseStream(rng.master_seed, [rng.path_index], b.N, rng.block_steps)
    return np.stack(
        [stream.increments(spec, dt, rng.step_counter + k)[0] for k in range(steps)]
    )


def picard_map(
    stepper: Stepper, u0: np.ndarray, iterate: np.ndarray, frozen: np.ndarray
) -> np.ndarray:
    """One application of the map to a trajectory ``(K+1, N)``."""
    b = stepper.b
    left = Field.from_coeffs(b, iterate[:-1])
    forcing = stepper.Wf * stepper.drift(left) + stepper.Wn * stepper.noise(left, frozen)
    out = np.empty_like(iterate)
    out[0] = u0
    for i in range(1, len(out)):
        out[i] = stepper.P * out[i - 1] + forcing[i - 1]
    return out


def picard_solve(
    b: SpectralBasis,
    m: PolyModel,
    spec: NoiseSpec,
    u0: Field,
    frozen: np.ndarray,
    T0: float,
    dt: float,
    tol: float = 1e-12,
    max_iter: int = 50,
    scheme: Scheme = Scheme.exponential_euler,
) -> PicardResult:
    """Fixed point of the mild-solution map on ``[0, T0]``.

    The convolution kernel uses the multipliers of ``scheme``: with the
    default exponential Euler the drift over a step is weighted by
    ``(1 - e^(-lam dt)) / lam`` rather than by the left-point ``dt``. Both
    weights agree to first order in ``dt``, and with the scheme's own weight
    the fixed point is exactly the `run_path` trajectory of that scheme.

    Iterates from the constant trajectory ``u0`` and records
    ``d_k = max_i ||u^(k+1)(t_i) - u^(k)(t_i)||_C0`` and the ratios
    ``d_k / d_(k-1)``. Stops at the first ``k`` with ``d_k < tol`` (a map
    constant in ``u`` stops at ``k = 1``).

    Args:
        b: Basis
        m: Nonlinearities, usually carrying a cutoff radius
        spec: Noise the increments were drawn from
        u0: Initial state
        frozen: Increment coefficients ``(K, N)``, ``K >= T0 / dt``
        T0: Horizon
        dt: Step
        tol: Sup distance of consecutive iterates at convergence
        max_iter: Iteration limit
        scheme: Whose multipliers form the convolution kernel

    Raises:
        NoConvergenceError: With the partial result when ``max_iter`` is
            reached, the horizon is too long for the map to contract
    """
    if m.cutoff_n is None:
        log.warning("Picard iteration on an untruncated model")
    cfg = StepperConfig(scheme=scheme, dt=dt, T=T0)
    steps = cfg.steps
    if frozen.shape[0] < steps:
        raise ValueError(f"Frozen noise covers {frozen.shape[0]} < {steps} steps")
    stepper = Stepper(cfg, b, m, spec)
    frozen = frozen[:steps]
    coeffs0 = np.asarray(u0.coeffs, dtype=float)
    current = np.broadcast_to(coeffs0, (steps + 1, b.N)).copy()
    distances: list[float] = []
    ratios: list[float] = []
    for k in range(max_iter):
        with np.errstate(over="ignore", invalid="ignore"):
            new = picard_map(stepper, coeffs0, current, frozen)
            diff = Field.from_coeffs(b, new - current)
            d = float(np.max(sup_norm(b, diff)))
        distances.append(d)
        if k > 0 and distances[k - 1] > 0:
            ratios.append(d / distances[k - 1])
        current = new
        if d < tol:
            log.info("Picard converged", iterations=k, T0=T0, max_ratio=max(ratios, default=0))
            return PicardResult(
                times=cfg.times,
                trajectory=Field.from_coeffs(b, current),
                distances=distances,
                ratios=ratios,
                iterations=k,
                converged=True,
            )
    result = PicardResult(
        times=cfg.times,
        trajectory=Field.from_coeffs(b, current),
        distances=distances,
        ratios=ratios,
        iterations=max_iter,
        converged=False,
    )
    raise NoConvergenceError(
        f"Picard iteration did not converge in {max_iter} iterations "
        f"(T0={T0}, last distance {distances[-1]:.3e})",
        result,
    )


def bdg_constant(q: float) -> float:
    """``(q (q-1) / 2)^(q/2)``"""
    return (q * (q - 1) / 2) ** (q / 2)


def check_admissible(q: float, alpha: float, gamma: float, xi_prime: float) -> None:
    """``2/q < 2 gamma < 1 - 2 alpha < 1 - 1/q`` and
    ``q gamma < xi' < 2 q gamma - 1``."""
    if not (2 / q < 2 * gamma < 1 - 2 * alpha < 1 - 1 / q):
        raise InadmissibleParameterError(
            f"Need 2/q < 2 gamma < 1 - 2 alpha < 1 - 1/q, got q={q}, "
            f"alpha={alpha}, gamma={gamma}"
        )
    if not (q * gamma < xi_prime < 2 * q * gamma - 1):
        raise InadmissibleParameterError(
            f"Need q gamma < xi' < 2 q gamma - 1, got xi'={xi_prime} "
            f"for q={q}, gamma={gamma}"
        )


def contraction_constant(
    Lip: float,
    q: float,
    alpha: float,
    gamma: float,
    xi_prime: float,
    theta: float,
    lambda_gap: float,
    domain_size: float = 1.0,
    lambda_1: float | None = None,
    embedding_constant: float | None = None,
) -> float:
    """Constant ``C`` of the smallness condition
    ``C (T0^q + T0^((1-2 alpha) q/2) + T0^xi') < 1``.

    Assembled from the stochastic convolution estimate (BDG constant,
    semigroup smoothing with the gap weight, Gamma-function integral), the
    dyadic chaining constant ``4^q / (1 - 2^-delta)^q`` with
    ``delta = (2 q gamma - 1 - xi') / q`` and the embedding of
    ``D(A^alpha)`` into ``C_0``.
    """
    check_admissible(q, alpha, gamma, xi_prime)
    if Lip < 0 or theta < 0:
        raise ValueError("Lipschitz constant and trace must be >= 0")
    if Lip == 0:
        return 0.0
    c_emb = embedding_constant or Settings().embedding_constant
    lam1 = 2 * lambda_gap if lambda_1 is None else lambda_1
    smoothing = (lam1 / (lam1 - lambda_gap)) ** alpha * alpha**alpha * np.exp(-alpha)
    k_alpha = bdg_constant(q) * domain_size * smoothing**q
    noise = k_alpha * theta ** (q / 2) * Lip**q
    c1 = noise * (1 - 2 * alpha) ** (-q / 2)
    c2 = (
        noise
        * (2 * lambda_gap) ** (q * (alpha + gamma - 0.5))
        * special.gamma(1 - 2 * (alpha + gamma)) ** (q / 2)
    )
    delta = (2 * q * gamma - 1 - xi_prime) / q
    chaining = 4**q / (1 - 2**-delta) ** q
    c3 = 2 ** (q - 1) * max(c1, c2 * chaining)
    c4 = c_emb**q * c3
    return float(2 ** (q - 1) * max(Lip**q, c4))


def contraction_budget(
    Lip: float,
    q: float,
    alpha: float,
    gamma: float,
    xi_prime: float,
    theta: float,
    lambda_gap: float,
    horizon: float = 1.0,
    **kwargs,
) -> float:
    """Largest dyadic ``T0 = horizon 2^-k`` with
    ``C (T0^q + T0^((1-2 alpha) q/2) + T0^xi') <= 1/2``.

    ``Lip = 0`` gives ``horizon``. Extra keyword arguments are passed on to
    `contraction_constant`.

    Raises:
        InadmissibleParameterError: If the exponents are not admissible
    """
    C = contraction_constant(Lip, q, alpha, gamma, xi_prime, theta, lambda_gap, **kwargs)
    if C == 0:
        return horizon
    exponents = np.array([q, (1 - 2 * alpha) * q / 2, xi_prime])
    T0 = horizon
    while T0 > 0 and C * np.sum(T0**exponents) > 0.5:
        T0 /= 2
    log.debug("Contraction budget", C=C, T0=T0, Lip=Lip)
    return T0


def empirical_contraction_horizon(
    b: SpectralBasis,
    m: PolyModel,
    spec: NoiseSpec,
    u0: Field,
    rng: RngStream,
    dt: float,
    start: float,
    max_horizon: float = 1024.0,
    max_iter: int = 50,
    scheme: Scheme = Scheme.exponential_euler,
) -> float:
    """First horizon of the doubling sweep ``start, 2 start, ...`` whose mean
    contraction ratio reaches 1; ``max_horizon`` if none up to there does
    (a lower bound then)."""
    T0 = max(start, dt)
    while T0 <= max_horizon:
        steps = max(1, int(round(T0 / dt)))
        frozen = freeze_increments(spec, b, dt, steps, rng)
        try:
            result = picard_solve(
                b, m, spec, u0, frozen, steps * dt, dt, max_iter=max_iter, scheme=scheme
            )
        except NoConvergenceError as e:
            result = e.result
        log.debug("Contraction sweep", T0=T0, mean_ratio=result.mean_ratio)
        if result.mean_ratio >= 1 or not np.isfinite(result.mean_ratio):
            return T0
        T0 *= 2
    return max_horizon
