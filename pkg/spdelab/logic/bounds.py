"""Checks of the explicit moment bounds against Monte Carlo estimates.

Bounds with explicit constants (energy inequality, Kolmogorov) are compared
point by point within two standard errors. Bounds whose constants are only
known to exist (mean dissipativity, critical regularity) are checked by
fitting the smallest envelope of the stated shape and asking whether it
stays finite and does not expand.
"""

import numpy as np
from anystore.logging import get_logger

from spdelab.exceptions import InadmissibleParameterError
from spdelab.logic.holder import holder_seminorm, holder_seminorm_grid
from spdelab.model.poly import HypothesisCertificate
from spdelab.model.probe import BoundReport, MomentSeries

log = get_logger(__name__)


def energy_constants(rho: float, c1: float, c2: float, domain_size: float = 1.0) -> tuple[float, float]:
    """``(c~1, c~2)`` of the ``L^rho`` energy inequality:
    ``c~1 = rho c1 / 2`` and
    ``c~2 = 2 (2 (rho-2) / (rho c1))^((rho-2)/rho) c2^(rho/2) |O|``."""
    if rho <= 2:
        raise InadmissibleParameterError(f"Energy inequality needs rho > 2, got {rho}")
    ct1 = rho * c1 / 2
    ct2 = 2 * (2 * (rho - 2) / (rho * c1)) ** ((rho - 2) / rho) * c2 ** (rho / 2) * domain_size
    return ct1, ct2


def check_energy_inequality(
    series: MomentSeries,
    cert: HypothesisCertificate,
    rho: float,
    u0_moment: float,
    domain_size: float = 1.0,
) -> BoundReport:
    """``E ||u(t)||_L^rho^rho <= E ||u0||_L^rho^rho e^(-c~1 t) + c~2 / c~1``.

    Raises:
        ValueError: If the certificate has no verified coercivity constants
        MissingMomentError: If the series lacks ``rho``
    """
    if not cert.verified or cert.c1 is None or cert.c2 is None:
        raise ValueError("Energy inequality needs a verified coercivity certificate")
    lhs, se = series.lrho(rho)
    ct1, ct2 = energy_constants(rho, cert.c1, cert.c2, domain_size)
    rhs = u0_moment * np.exp(-ct1 * series.times) + ct2 / ct1
    report = BoundReport.make(
        f"energy_L{rho:g}",
        series.times,
        lhs,
        rhs,
        se,
        rho=rho,
        c1_tilde=ct1,
        c2_tilde=ct2,
        plateau=ct2 / ct1,
    )
    log.info("Energy inequality", rho=rho, verdict=str(report.verdict), margin=report.margin)
    return report


def _envelope_fit(m: np.ndarray, se: np.ndarray, env: np.ndarray, times: np.ndarray):
    with np.errstate(divide="ignore", invalid="ignore"):
        C_hat = float(np.max(m / env))
        mid = 0.5 * (times[0] + times[-1])
        first = times <= mid
        C_first = float(np.max((m[first] + 2 * se[first]) / env[first]))
        second_low = (m[~first] - 2 * se[~first]) / env[~first]
    ok = bool(np.isfinite(C_hat) and np.all(second_low <= C_first))
    return C_hat, C_first, ok


def check_dissipativity(
    series: MomentSeries,
    cert: HypothesisCertificate,
    q: float,
    r: int,
    u0_qr_moment: float,
) -> BoundReport:
    """Fit the smallest ``C^`` with
    ``E ||u(t)||_C0^q <= C^ (E ||u0||_L^qr^qr e^(-c-1 (t-1)) + 1)``,
    ``c-1 = q r c1 / 2``, over the recorded ``t >= 1``.

    Passes iff ``C^`` is finite and the envelope fitted on the first half of
    that window (plus two standard errors) still dominates the second half
    (minus two standard errors).

    Raises:
        InadmissibleParameterError: If the series ends before ``t = 1``
    """
    if cert.c1 is None:
        raise ValueError("Dissipativity check needs a verified coercivity certificate")
    window = series.times >= 1
    if series.times[-1] < 1 or window.sum() < 2:
        raise InadmissibleParameterError(
            f"Dissipativity check needs records beyond t = 1, horizon is {series.times[-1]}"
        )
    rate = q * r * cert.c1 / 2
    t = series.times[window]
    m = series.m_c0_q[window]
    se = series.m_c0_q_se[window]
    env = u0_qr_moment * np.exp(-rate * (t - 1)) + 1
    C_hat, C_first, ok = _envelope_fit(m, se, env, t)
    report = BoundReport.make(
        "dissipativity",
        t,
        m,
        C_hat * env,
        se,
        verdict=ok,
        C_hat=C_hat,
        C_first_half=C_first,
        rate=rate,
    )
    report.qualifier = "envelope fit, non-expanding over the second half"
    log.info("Dissipativity", rate=rate, C_hat=C_hat, verdict=str(report.verdict))
    return report


def kolmogorov_bound(C: float, q: float, xi: float, eta: float, T: float) -> float:
    """``B = 4^q C T^xi / (1 - 2^-delta)^q`` with ``delta = (xi-1)/q - eta``.

    Raises:
        InadmissibleParameterError: Unless ``q, xi > 1`` and
            ``0 < eta < (xi-1)/q``
    """
    if q <= 1 or xi <= 1:
        raise InadmissibleParameterError(f"Need q, xi > 1, got q={q}, xi={xi}")
    if not 0 < eta < (xi - 1) / q:
        raise InadmissibleParameterError(
            f"Need 0 < eta < (xi-1)/q = {(xi - 1) / q}, got eta={eta}"
        )
    delta = (xi - 1) / q - eta
    return 4**q * C * T**xi / (1 - 2**-delta) ** q


def chaining_constant(q: float, xi: float, xi_prime: float) -> float:
    """``C_(q,xi,xi') = 4^q / (1 - 2^-delta)^q``, ``delta = (2 xi - 1 - xi') / q``,
    for ``xi < xi' < 2 xi - 1``."""
    if not xi < xi_prime < 2 * xi - 1:
        raise InadmissibleParameterError(
            f"Need xi < xi' < 2 xi - 1, got xi={xi}, xi'={xi_prime}"
        )
    delta = (2 * xi - 1 - xi_prime) / q
    return 4**q / (1 - 2**-delta) ** q


def sup_moment_bound(
    C: float, q: float, xi: float, T: float, M0: float, xi_prime: float | None = None
) -> float:
    """``E sup_t ||v_t||^q <= 2^(q-1) (C C_(q,xi,xi') T^xi' + M0)``; ``xi'``
    defaults to the middle of ``(xi, 2 xi - 1)``."""
    if xi_prime is None:
        xi_prime = (3 * xi - 1) / 2
    return 2 ** (q - 1) * (C * chaining_constant(q, xi, xi_prime) * T**xi_prime + M0)


def check_kolmogorov(
    paths: np.ndarray,
    C: float,
    q: float,
    xi: float,
    eta: float,
    T: float = 1.0,
    grid: bool = False,
    xi_prime: float | None = None,
) -> BoundReport:
    """Compare the empirical ``E K^q`` of dyadic-sampled paths with ``B``.

    ``paths`` has shape ``(paths, 2^n + 1)`` for scalar processes or
    ``(paths, 2^n + 1, G)`` for grid states (``grid=True``, sup norm). The
    supremum bound of the chaining corollary is checked alongside and must
    hold too; both are reported in ``constants``.
    """
    paths = np.asarray(paths, dtype=float)
    B = kolmogorov_bound(C, q, xi, eta, T)
    K = holder_seminorm_grid(paths, eta, T) if grid else holder_seminorm(paths, eta, T)
    K = np.atleast_1d(K)
    Kq = K**q
    M = len(Kq)
    mean = float(Kq.mean())
    se = float(Kq.std(ddof=1) / np.sqrt(M)) if M > 1 else 0.0

    norms = np.abs(paths).max(axis=-1) if grid else np.abs(paths)
    M0 = float(np.max(np.mean(norms**q, axis=0)))
    sup_mean = float(np.mean(np.max(norms, axis=-1) ** q))
    sup_bound = sup_moment_bound(C, q, xi, T, M0, xi_prime)

    passed = mean <= B + 2 * se and sup_mean <= sup_bound
    report = BoundReport.make(
        "kolmogorov",
        [T],
        [mean],
        [B],
        [se],
        verdict=passed,
        B=B,
        ratio=B / mean if mean > 0 else None,
        sup_moment=sup_mean,
        sup_bound=sup_bound,
        M0=M0,
    )
    log.info("Kolmogorov", B=B, mean_Kq=mean, verdict=str(report.verdict))
    return report


def regularity_probe(
    series: MomentSeries, kappa_max: float | None = None, points: int = 200
) -> BoundReport:
    """Envelope ``C^ (t^kappa + 1)`` of ``E ||A^(1/2) u(t)||_L^q^q``.

    ``kappa`` runs over a grid in ``(0, min(q-1, kappa_max))``; the estimate
    minimises the area under the envelope. Passes iff the envelope is finite
    (``kappa^ < q - 1`` holds by construction).

    Raises:
        MissingMomentError: Without ``H^1`` moments
    """
    m, se = series.h1()
    upper = series.q - 1 if kappa_max is None else min(kappa_max, series.q - 1)
    kappas = np.linspace(0, upper, points + 2)[1:-1]
    t = series.times
    shapes = t[None, :] ** kappas[:, None] + 1
    C = np.max(m[None, :] / shapes, axis=1)
    envelopes = C[:, None] * shapes
    if len(t) > 1:
        areas = np.trapezoid(envelopes, t, axis=1)
    else:
        areas = envelopes[:, 0]
    best = int(np.argmin(areas))
    C_hat, kappa_hat = float(C[best]), float(kappas[best])
    passed = bool(np.isfinite(C_hat) and kappa_hat < series.q - 1)
    report = BoundReport.make(
        "regularity",
        t,
        m,
        envelopes[best],
        se,
        verdict=passed,
        C_hat=C_hat,
        kappa_hat=kappa_hat,
    )
    report.qualifier = "envelope fit"
    return report
