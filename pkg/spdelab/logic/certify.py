"""Pointwise evaluation of the nonlinearities and certification of the
coercivity (H2) and one-sided Lipschitz (H3) conditions.

For ``K = (q r^2 - 1) Theta`` the coercivity function

    g(u) = f(u) u + K sigma(u)^2 + c1 u^2

is a polynomial in ``|u|`` on each half line (``f(u) u = sum_j b_j |u|^(j+1)``
is even), so its maximum ``c2`` is found exactly by isolating the critical
points of two univariate polynomials. The two-point conditions of (H3) have
no such reduction; they are maximised on a square grid and checked for
unbounded growth along rays, which can falsify but never prove them.
"""

import numpy as np
from anystore.logging import get_logger
from numpy.polynomial import polynomial as P

from spdelab.core.settings import Settings
from spdelab.exceptions import InadmissibleParameterError
from spdelab.logic import polynomial
from spdelab.logic.basis import sup_norm
from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.poly import (
    HypothesisCertificate,
    PolyModel,
    Status,
    Witness,
    cutoff_chi,
)

settings = Settings()
log = get_logger(__name__)

FLOOR = 1e-12
GRID_POINTS = 801
RAY_DOUBLINGS = 16


def _weight(m: PolyModel, values: np.ndarray, b: SpectralBasis, u: Field) -> np.ndarray:
    if m.cutoff_n is None:
        return values
    chi = cutoff_chi(m.cutoff_n, sup_norm(b, u))
    return np.asarray(chi)[..., None] * values


def eval_f(m: PolyModel, u: Field) -> Field:
    """``f(u)`` applied on the grid; with a cutoff radius ``n`` the truncated
    ``chi_n(||u||_C0) f(u)`` (per path for batched fields)."""
    values = m.f(u.values)
    return Field.from_values(u.basis, _weight(m, values, u.basis, u))


def eval_sigma(m: PolyModel, u: Field) -> Field:
    """``sigma(u)`` applied on the grid, truncated like `eval_f`."""
    values = m.sigma(u.values)
    return Field.from_values(u.basis, _weight(m, values, u.basis, u))


def noise_weight(q: float, r: int, theta: float) -> float:
    """``K = (q r^2 - 1) Theta``"""
    return (q * r**2 - 1) * theta


def _check_q(q: float) -> None:
    if q <= 6:
        raise InadmissibleParameterError(
            f"Moment exponent must satisfy q > 2(d+2) = 6, got q={q}"
        )


def coercivity_halves(m: PolyModel, K: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients in ``v = |u|`` of ``f(u) u + K sigma(u)^2`` for
    ``u = v`` and ``u = -v`` (without the ``c1`` term)."""
    fu = np.zeros(len(m.f_coeffs) + 2)
    for j, bj in enumerate(m.f_coeffs, start=1):
        fu[j + 1] = bj
    s = np.asarray(m.sigma_coeffs or [0.0], dtype=float)
    s_neg = s * (-1.0) ** np.arange(len(s))
    plus = P.polyadd(fu, K * P.polymul(s, s))
    minus = P.polyadd(fu, K * P.polymul(s_neg, s_neg))
    return polynomial.trim(plus), polynomial.trim(minus)


def coercivity_function(m: PolyModel, K: float, c1: float, u: np.ndarray) -> np.ndarray:
    """``g(u) = f(u) u + K sigma(u)^2 + c1 u^2``"""
    u = np.asarray(u, dtype=float)
    return m.f(u) * u + K * m.sigma(u) ** 2 + c1 * u**2


def _coefficient(c: np.ndarray, k: int) -> float:
    return float(c[k]) if k < len(c) else 0.0


def _select_c1(plus: np.ndarray, minus: np.ndarray) -> tuple[float | None, float]:
    """Coercivity constant (halved largest feasible value in ``[0, c1_cap]``)
    and the leading coefficient deciding feasibility."""
    cap = settings.c1_cap
    deg = max(polynomial.degree(plus), polynomial.degree(minus))
    if deg > 2:
        lead = polynomial.leading(plus if polynomial.degree(plus) == deg else minus)
        return (cap / 2 if lead < 0 else None), lead
    a2 = max(_coefficient(plus, 2), _coefficient(minus, 2))
    if a2 >= 0:
        return None, a2
    if a2 + cap < 0:
        return cap / 2, a2
    lo, hi = 0.0, cap
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if a2 + mid < 0:
            lo = mid
        else:
            hi = mid
    return lo / 2, a2


def _growth_constant(m: PolyModel, radius: float) -> tuple[float, Witness]:
    u = np.linspace(-radius, radius, 200_001)
    ratio = (np.abs(m.f(u)) + np.abs(m.sigma(u))) / (np.abs(u) ** m.r + 1)
    k = int(np.argmax(ratio))
    limit = 0.0
    if m.beta == m.r:
        limit += abs(float(m.b[-1]))
    if m.gamma == m.r:
        limit += abs(float(m.s[-1]))
    c3 = max(float(ratio[k]), limit, FLOOR)
    return c3, Witness(constant="c3", u=float(u[k]), value=float(ratio[k]))


def certify_H2(m: PolyModel, q: float, theta: float) -> HypothesisCertificate:
    """Certify ``f(u)u + (qr^2-1) Theta sigma(u)^2 <= -c1 u^2 + c2`` and the
    growth bound ``|f(u)| + |sigma(u)| <= c3 (|u|^r + 1)``.

    Args:
        m: Polynomial model
        q: Moment exponent, ``q > 6``
        theta: Noise trace the certificate is issued for

    Returns:
        Certificate with status ``H2`` verified (explicit c1, c2, c3) or
        falsified (leading coefficient of the coercivity function >= 0)

    Raises:
        InadmissibleParameterError: If ``q <= 6``
    """
    _check_q(q)
    K = noise_weight(q, m.r, theta)
    plus, minus = coercivity_halves(m, K)
    c1, lead = _select_c1(plus, minus)
    cert = HypothesisCertificate(
        q=q, r=m.r, theta=theta, leading_coefficient=lead, example_ex1=m.example_ex1
    )
    if c1 is None:
        log.warning(
            "Coercivity falsified: leading coefficient is non-negative",
            leading_coefficient=lead,
            K=K,
        )
        cert.status["H2"] = Status.FALSIFIED
        return cert

    g_plus = P.polyadd(plus, [0.0, 0.0, c1])
    g_minus = P.polyadd(minus, [0.0, 0.0, c1])
    v_plus, max_plus = polynomial.maximize_halfline(g_plus)
    v_minus, max_minus = polynomial.maximize_halfline(g_minus)
    if max_plus >= max_minus:
        u_star, c2 = v_plus, max_plus
    else:
        u_star, c2 = -v_minus, max_minus
    radius = 4 * max(
        1.0, polynomial.cauchy_bound(g_plus), polynomial.cauchy_bound(g_minus)
    )
    c3, w3 = _growth_constant(m, radius)

    cert.c1 = c1
    cert.c2 = max(c2, FLOOR)
    cert.c3 = c3
    cert.witnesses = [
        Witness(constant="c2", u=u_star, value=c2),
        w3,
    ]
    cert.status["H2"] = Status.VERIFIED
    log.info("Coercivity verified", c1=c1, c2=cert.c2, c3=c3, K=K)
    return cert


def _one_sided_quotient(m: PolyModel, K: float, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    diff = u - v
    same = diff == 0
    safe = np.where(same, 1.0, diff)
    off = (m.f(u) - m.f(v)) / safe + K * ((m.sigma(u) - m.sigma(v)) / safe) ** 2
    diag = m.df(u) + K * m.dsigma(u) ** 2
    return np.where(same, diag, off)


def _local_lipschitz_quotient(m: PolyModel, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    diff = u - v
    same = diff == 0
    safe = np.where(same, 1.0, np.abs(diff))
    e = m.r - 1
    off = (np.abs(m.f(u) - m.f(v)) + np.abs(m.sigma(u) - m.sigma(v))) / (
        safe * (1 + np.abs(u) ** e + np.abs(v) ** e)
    )
    diag = (np.abs(m.df(u)) + np.abs(m.dsigma(u))) / (1 + 2 * np.abs(u) ** e)
    return np.where(same, diag, off)


def _grid_max(quotient, radius: float, constant: str) -> tuple[float, Witness]:
    axis = np.linspace(-radius, radius, GRID_POINTS)
    U, V = np.meshgrid(axis, axis, indexing="ij")
    with np.errstate(over="ignore", invalid="ignore"):
        values = quotient(U, V)
    i, j = np.unravel_index(int(np.nanargmax(values)), values.shape)
    best = float(values[i, j])
    return best, Witness(constant=constant, u=float(U[i, j]), v=float(V[i, j]), value=best)


def _rays_unbounded(quotient, radius: float, grid_max: float) -> bool:
    """Growth along ``u = -v``, ``v = 0`` and ``u = 0`` at ``s = R 2^k``: the
    quotient is unbounded if it keeps growing geometrically and already
    exceeds twice the grid maximum."""
    s = radius * 2.0 ** np.arange(RAY_DOUBLINGS + 1)
    zero = np.zeros_like(s)
    with np.errstate(over="ignore", invalid="ignore"):
        rays = [quotient(s, -s), quotient(s, zero), quotient(-s, zero)]
    bound = max(2 * grid_max, 1.0)
    for values in rays:
        tail = values[-4:]
        if not np.all(np.isfinite(tail)):
            return True
        if np.all(tail[1:] >= 1.5 * tail[:-1]) and tail[-1] > bound:
            return True
    return False


def certify_H3(
    m: PolyModel, q: float, theta: float, R: float = 4.0
) -> HypothesisCertificate:
    """Grid audit of the one-sided Lipschitz condition

        (f(u)-f(v))(u-v) + (qr^2-1) Theta |sigma(u)-sigma(v)|^2 <= c4 |u-v|^2

    and the polynomial Lipschitz condition

        |f(u)-f(v)| + |sigma(u)-sigma(v)| <= c5 (1 + |u|^(r-1) + |v|^(r-1)) |u-v|

    on ``[-R, R]^2`` (diagonal from derivatives), plus ray checks for growth
    beyond the grid. Status is ``grid-verified-only`` or ``falsified``.
    """
    _check_q(q)
    if R <= 0:
        raise ValueError(f"Audit radius must be > 0, got {R}")
    K = noise_weight(q, m.r, theta)

    def q4(u, v):
        return _one_sided_quotient(m, K, u, v)

    def q5(u, v):
        return _local_lipschitz_quotient(m, u, v)

    c4, w4 = _grid_max(q4, R, "c4")
    c5, w5 = _grid_max(q5, R, "c5")
    falsified = _rays_unbounded(q4, R, c4) or _rays_unbounded(q5, R, c5)
    cert = HypothesisCertificate(q=q, r=m.r, theta=theta, example_ex1=m.example_ex1)
    if falsified:
        log.warning("One-sided Lipschitz condition falsified along a ray", K=K, R=R)
        cert.status["H3"] = Status.FALSIFIED
        return cert
    cert.c4 = max(c4, FLOOR)
    cert.c5 = max(c5, FLOOR)
    cert.witnesses = [w4, w5]
    cert.status["H3"] = Status.GRID_ONLY
    return cert


def certify(
    m: PolyModel, q: float, theta: float, R: float = 4.0
) -> HypothesisCertificate:
    """Both hypotheses in one certificate."""
    return certify_H2(m, q, theta).merge(certify_H3(m, q, theta, R))


def audit_coercivity(
    m: PolyModel, cert: HypothesisCertificate, radius: float, points: int = 1_000_001
) -> float:
    """Largest residual ``g(u) - c2`` on a dense grid over ``[-radius, radius]``
    (``<= 0`` up to rounding for a sound certificate)."""
    if cert.c1 is None or cert.c2 is None:
        raise ValueError("Certificate carries no coercivity constants")
    u = np.linspace(-radius, radius, points)
    g = coercivity_function(m, cert.noise_weight, cert.c1, u)
    return float(np.max(g) - cert.c2)


def truncated_lipschitz(m: PolyModel, points: int = 200_001) -> float:
    """Grid estimate of the global Lipschitz constant of the truncated
    nonlinearities ``chi_n(|u|) f(u)`` and ``chi_n(|u|) sigma(u)`` (both vanish
    beyond ``2n``)."""
    if m.cutoff_n is None:
        raise ValueError("Lipschitz audit needs a cutoff radius")
    u = np.linspace(-2.5 * m.cutoff_n, 2.5 * m.cutoff_n, points)
    du = u[1] - u[0]
    lip_f = np.max(np.abs(np.diff(m.f_n(u)))) / du
    lip_sigma = np.max(np.abs(np.diff(m.sigma_n(u)))) / du
    return float(max(lip_f, lip_sigma))
