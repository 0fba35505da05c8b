"""Monte Carlo moment estimation over an ensemble of paths."""

from typing import Iterable

import numpy as np
from anystore.logging import get_logger

from spdelab.exceptions import EmptyEnsembleError
from spdelab.logic.basis import apply_fractional, lq_moment, sup_norm
from spdelab.model.basis import Field
from spdelab.model.path import EnsembleResult, PathResult
from spdelab.model.probe import MomentSeries

log = get_logger(__name__)


def _stack(ensemble: EnsembleResult | Iterable[PathResult]) -> tuple[np.ndarray, Field]:
    if isinstance(ensemble, EnsembleResult):
        return ensemble.times, ensemble.states
    paths = list(ensemble)
    if not paths:
        raise EmptyEnsembleError("Cannot estimate moments of an empty ensemble")
    basis = paths[0].states.basis
    coeffs = np.stack([p.states.coeffs for p in paths])
    return paths[0].times, Field.from_coeffs(basis, coeffs)


def _mean_se(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and standard error over the path axis (axis 0)."""
    M = samples.shape[0]
    mean = samples.mean(axis=0)
    if M < 2:
        return mean, np.zeros_like(mean)
    return mean, samples.std(axis=0, ddof=1) / np.sqrt(M)


def estimate_moments(
    ensemble: EnsembleResult | Iterable[PathResult],
    q: float,
    rho_list: Iterable[float] = (),
    h1: bool = True,
) -> MomentSeries:
    """Sample means and standard errors of ``||u||_C0^q``,
    ``||u||_L^rho^rho`` for each ``rho`` and ``||A^(1/2) u||_L^q^q`` at every
    recorded time.

    A single path gives zero standard errors.

    Raises:
        EmptyEnsembleError: Without paths
    """
    times, states = _stack(ensemble)
    M = states.batch_shape[0] if states.batch_shape else 0
    if M < 1:
        raise EmptyEnsembleError("Cannot estimate moments of an empty ensemble")
    if M < 2:
        log.warning("Single path ensemble, standard errors are zero")
    b = states.basis
    sup = np.asarray(sup_norm(b, states))
    m_c0, se_c0 = _mean_se(sup**q)
    series = MomentSeries(times=np.asarray(times), q=q, M=M, m_c0_q=m_c0, m_c0_q_se=se_c0)
    for rho in rho_list:
        rho = float(rho)
        mean, se = _mean_se(np.asarray(lq_moment(b, states, rho)))
        series.m_lrho_rho[rho] = mean
        series.m_lrho_rho_se[rho] = se
    if h1:
        grad = apply_fractional(b, 0.5, states)
        series.m_h1_q, series.m_h1_q_se = _mean_se(np.asarray(lq_moment(b, grad, q)))
    return series
