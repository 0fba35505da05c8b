"""Time stepping of ``du = (-A u + f(u)) dt + sigma(u) dW``.

All schemes share one update in coefficient space,

    u+ = P u + Wf f^(u) + Wn [sigma(u) dW]^

with diagonal multipliers per scheme:

    semi_implicit      P = 1/(1 + dt lam)   Wf = dt P            Wn = P
    exponential_euler  P = exp(-lam dt)     Wf = (1 - P) / lam   Wn = P
    tamed_explicit     P = exp(-lam dt)     Wf = dt              Wn = 1

Nonlinear terms are evaluated on the grid; ``tamed_explicit`` replaces the
drift by ``f / (1 + dt |f|)`` pointwise. Paths are integrated as a batch;
a path whose state overflows is frozen at its last finite state and flagged,
a path reaching the stopping radius is frozen at the crossing state.
"""

from typing import Callable, Sequence

import numpy as np
from anystore.logging import get_logger

from spdelab.logic.basis import sup_norm
from spdelab.logic.certify import eval_f, eval_sigma
from spdelab.logic.noise import NoiseStream, sample_increment
from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.noise import NoiseSpec, RngStream
from spdelab.model.path import EnsembleResult, PathResult, Scheme, StepperConfig
from spdelab.model.poly import PolyModel

log = get_logger(__name__)

Increments = Callable[[int], np.ndarray | None]


class Stepper:
    """Diagonal multipliers of one scheme and the nonlinear terms of a model."""

    def __init__(
        self, cfg: StepperConfig, b: SpectralBasis, m: PolyModel, spec: NoiseSpec
    ) -> None:
        self.cfg = cfg
        self.b = b
        self.m = m
        self.spec = spec
        dt, lam = cfg.dt, b.lam
        if cfg.scheme == Scheme.semi_implicit:
            self.P = 1 / (1 + dt * lam)
            self.Wf = dt * self.P
            self.Wn = self.P
        elif cfg.scheme == Scheme.exponential_euler:
            self.P = np.exp(-lam * dt)
            self.Wf = -np.expm1(-lam * dt) / lam
            self.Wn = self.P
        else:
            self.P = np.exp(-lam * dt)
            self.Wf = np.full_like(lam, dt)
            self.Wn = np.ones_like(lam)
        self.has_drift = m.beta > 0
        self.has_noise = bool(np.any(m.s)) and not spec.is_zero

    def drift(self, u: Field) -> np.ndarray:
        if not self.has_drift:
            return np.zeros_like(u.coeffs)
        values = eval_f(self.m, u).values
        if self.cfg.scheme == Scheme.tamed_explicit:
            values = values / (1 + self.cfg.dt * np.abs(values))
        return self.b.to_spectral(values)

    def noise(self, u: Field, dW: np.ndarray | None) -> np.ndarray:
        """``[sigma(u) dW]^`` with the product taken on the grid."""
        if dW is None or not self.has_noise:
            return np.zeros_like(u.coeffs)
        product = eval_sigma(self.m, u).values * self.b.to_grid(dW)
        return self.b.to_spectral(product)

    def advance(self, coeffs: np.ndarray, dW: np.ndarray | None) -> np.ndarray:
        u = Field.from_coeffs(self.b, coeffs)
        return self.P * coeffs + self.Wf * self.drift(u) + self.Wn * self.noise(u, dW)


def step(
    cfg: StepperConfig,
    b: SpectralBasis,
    m: PolyModel,
    spec: NoiseSpec,
    u: Field,
    rng: RngStream,
) -> Field:
    """Advance ``u`` by one step of ``cfg.dt``, drawing the increment from
    ``rng``. Overflow yields a non-finite field, it never raises."""
    dW = sample_increment(spec, b, cfg.dt, rng)
    with np.errstate(over="ignore", invalid="ignore"):
        coeffs = Stepper(cfg, b, m, spec).advance(u.coeffs, dW.coeffs)
    return Field.from_coeffs(b, coeffs)


def stream_increments(stepper: Stepper, stream: NoiseStream, start: int = 0) -> Increments:
    """Increments of the stream's paths for step ``k`` (offset by ``start``)."""
    if not stepper.has_noise:
        return lambda k: None

    def increments(k: int) -> np.ndarray:
        return stream.increments(stepper.spec, stepper.cfg.dt, start + k)

    return increments


def integrate(
    stepper: Stepper,
    coeffs0: np.ndarray,
    increments: Increments,
    path_indices: Sequence[int] | None = None,
) -> EnsembleResult:
    """Integrate a batch of initial coefficients ``(P, N)`` up to ``T``."""
    cfg, b = stepper.cfg, stepper.b
    coeffs = np.array(coeffs0, dtype=float, copy=True)
    paths = coeffs.shape[0]
    record_steps = cfg.record_steps
    records = np.empty((paths, len(record_steps), b.N))
    sup_history = np.empty((paths, len(record_steps)))
    tau = np.full(paths, np.nan)
    tau_sup = np.full(paths, np.nan)
    blown_up = np.zeros(paths, dtype=bool)
    active = np.ones(paths, dtype=bool)

    radius = cfg.stop_radius_n if cfg.stops else None
    sup = np.atleast_1d(sup_norm(b, Field.from_coeffs(b, coeffs)))
    if radius is not None:
        hit = sup >= radius
        tau[hit] = 0.0
        tau_sup[hit] = sup[hit]
        active &= ~hit

    r = 0
    if record_steps[0] == 0:
        records[:, 0] = coeffs
        sup_history[:, 0] = sup
        r = 1
    for k in range(cfg.steps):
        dW = increments(k)
        sup = None
        # frozen paths are still recorded
        if active.any():
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                new = stepper.advance(coeffs, dW)
            finite = np.all(np.isfinite(new), axis=-1)
            blown = active & ~finite
            if blown.any():
                blown_up |= blown
                log.warning(
                    "Path blew up, freezing at last finite state",
                    paths=np.flatnonzero(blown).tolist(),
                    step=k + 1,
                    t=(k + 1) * cfg.dt,
                )
            active &= finite
            coeffs = np.where(active[:, None], new, coeffs)
        if radius is not None and active.any():
            sup = np.atleast_1d(sup_norm(b, Field.from_coeffs(b, coeffs)))
            hit = active & (sup >= radius)
            if hit.any():
                tau[hit] = (k + 1) * cfg.dt
                tau_sup[hit] = sup[hit]
                active &= ~hit
        if r < len(record_steps) and record_steps[r] == k + 1:
            records[:, r] = coeffs
            if sup is None:
                sup = np.atleast_1d(sup_norm(b, Field.from_coeffs(b, coeffs)))
            sup_history[:, r] = sup
            r += 1

    hits = int(np.sum(np.isfinite(tau)))
    if hits:
        log.info("Stopping radius reached", paths=hits, radius=radius)
    return EnsembleResult(
        basis=b,
        times=cfg.times,
        coeffs=records,
        sup_history=sup_history,
        tau_n_hit=tau,
        tau_n_sup=tau_sup,
        blown_up=blown_up,
        path_indices=list(path_indices) if path_indices is not None else list(range(paths)),
    )


def run_path(
    cfg: StepperConfig,
    b: SpectralBasis,
    m: PolyModel,
    spec: NoiseSpec,
    u0: Field,
    rng: RngStream,
) -> PathResult:
    """Integrate one path from ``u0`` to ``T`` with the noise of ``rng``.

    The path is stopped at the first step where ``||u||_C0 >= n`` when
    ``cfg.stop_radius_n`` is set (``u(t ^ tau_n)``). ``rng`` is advanced by
    the number of steps, like repeated calls of `step` would.
    """
    stepper = Stepper(cfg, b, m, spec)
    stream = NoiseStream(rng.master_seed, [rng.path_index], b.N, rng.block_steps)
    increments = stream_increments(stepper, stream, rng.step_counter)
    result = integrate(stepper, u0.coeffs[None, :], increments, [rng.path_index])
    rng.step_counter += cfg.steps
    return result.path(0)
