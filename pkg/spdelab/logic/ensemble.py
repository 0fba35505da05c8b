"""Ensemble fan-out over worker threads.

Paths are split into chunks of consecutive indices, each chunk is integrated
as one vectorised batch with its own noise streams, and the chunks are
concatenated in path-index order. Every path's noise depends on its index
only, so results do not depend on chunk size or thread count.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from anystore.logging import get_logger
from anystore.util import Took

from spdelab.core.settings import Settings
from spdelab.exceptions import EmptyEnsembleError, InvalidDimensionError
from spdelab.logic.integrate import Stepper, integrate, stream_increments
from spdelab.logic.noise import NoiseStream
from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.noise import NoiseSpec
from spdelab.model.path import EnsembleResult, StepperConfig
from spdelab.model.poly import PolyModel

log = get_logger(__name__)


def run_ensemble(
    cfg: StepperConfig,
    b: SpectralBasis,
    m: PolyModel,
    spec: NoiseSpec,
    u0: Field,
    paths: int,
    master_seed: int | None = None,
    threads: int | None = None,
    chunk_paths: int | None = None,
) -> EnsembleResult:
    """Integrate ``paths`` independent paths.

    Args:
        cfg: Stepper configuration
        b: Basis
        m: Nonlinearities
        spec: Noise
        u0: Initial state, shared (no batch axis) or one per path
        paths: Number of paths
        master_seed: Seed of the noise streams, default from settings
        threads: Worker threads, default from settings
        chunk_paths: Paths per vectorised batch, default from settings

    Returns:
        Trajectories in path-index order
    """
    settings = Settings()
    if paths < 1:
        raise EmptyEnsembleError(f"Ensemble needs at least one path, got {paths}")
    seed = settings.seed if master_seed is None else master_seed
    threads = threads or settings.threads
    chunk_paths = chunk_paths or settings.chunk_paths

    coeffs0 = np.asarray(u0.coeffs, dtype=float)
    if coeffs0.ndim == 1:
        coeffs0 = np.broadcast_to(coeffs0, (paths, b.N))
    elif coeffs0.shape != (paths, b.N):
        raise InvalidDimensionError(
            f"Initial states have shape {coeffs0.shape}, expected {(paths, b.N)}"
        )

    stepper = Stepper(cfg, b, m, spec)
    chunks = [range(i, min(i + chunk_paths, paths)) for i in range(0, paths, chunk_paths)]

    def work(indices: range) -> EnsembleResult:
        stream = NoiseStream(seed, indices, b.N)
        increments = stream_increments(stepper, stream)
        result = integrate(stepper, coeffs0[indices.start : indices.stop], increments, indices)
        log.debug("Chunk done", first=indices.start, paths=len(indices))
        return result

    with Took() as t:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    result = EnsembleResult.concat(parts)
    log.info(
        "Ensemble done",
        paths=paths,
        steps=cfg.steps,
        scheme=str(cfg.scheme),
        seed=seed,
        hits=result.hits,
        blown_up=int(result.blown_up.sum()),
        took=t.took,
    )
    return result
