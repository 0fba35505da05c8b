"""End-to-end checks of the numerical contracts on reference problems."""

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from spdelab.logic import polynomial
from spdelab.logic.basis import (
    apply_fractional,
    apply_semigroup,
    build_basis,
    lq_moment,
    semigroup_operator_bound,
    sup_norm,
)
from spdelab.logic.bounds import (
    check_dissipativity,
    check_energy_inequality,
    check_kolmogorov,
    energy_constants,
    kolmogorov_bound,
)
from spdelab.logic.certify import (
    audit_coercivity,
    certify_H2,
    coercivity_function,
    coercivity_halves,
    truncated_lipschitz,
)
from spdelab.logic.ensemble import run_ensemble
from spdelab.logic.holder import brownian_paths
from spdelab.logic.integrate import run_path
from spdelab.logic.moments import estimate_moments
from spdelab.logic.noise import build_noise, theta_mn, truncate
from spdelab.logic.picard import (
    contraction_budget,
    empirical_contraction_horizon,
    freeze_increments,
    picard_solve,
)
from spdelab.model.basis import Field
from spdelab.model.noise import PowerFamily, RngStream
from spdelab.model.path import StepperConfig
from spdelab.model.poly import PolyModel, Status


def test_spectral_exactness():
    b = build_basis(1.0, 1.0, 64)
    rng = np.random.default_rng(0)
    u = Field.from_coeffs(b, rng.standard_normal(64) / b.modes)
    s, t = 0.003, 0.01
    # eigen action
    e5 = Field.mode(b, 5)
    assert np.allclose(apply_semigroup(b, t, e5).coeffs, np.exp(-b.lam[4] * t) * e5.coeffs, rtol=1e-12, atol=0)
    # semigroup law
    both = apply_semigroup(b, s, apply_semigroup(b, t, u)).coeffs
    assert np.allclose(both, apply_semigroup(b, s + t, u).coeffs, rtol=1e-12, atol=0)
    # additivity of fractional powers
    left = apply_fractional(b, 0.25, apply_fractional(b, 0.5, u)).coeffs
    assert np.allclose(left, apply_fractional(b, 0.75, u).coeffs, rtol=1e-12, atol=0)
    # A^alpha commutes with S(t)
    one = apply_fractional(b, 0.5, apply_semigroup(b, t, u)).coeffs
    two = apply_semigroup(b, t, apply_fractional(b, 0.5, u)).coeffs
    assert np.allclose(one, two, rtol=1e-12, atol=0)
    # smoothing
    for alpha in (0.25, 0.5):
        for t in np.geomspace(1e-4, 1, 50):
            bound = t**alpha * semigroup_operator_bound(b, alpha, t)
            assert bound <= alpha**alpha * np.exp(-alpha) + 1e-9


def ou_second_moment(mu, kappa, u0, times):
    """``E ||u(t)||_L2^2`` of independent OU modes ``du_j = -kappa_j u_j dt + sqrt(mu_j) dB_j``."""
    decay = np.exp(-2 * np.outer(times, kappa))
    return decay @ u0**2 + (1 - decay) @ (mu / (2 * kappa))


def discrete_ou_second_moment(mu, lam, u0, dt, steps):
    """Same for the exponential Euler recursion ``u+ = a u + P dW`` with
    ``P = exp(-lam dt)`` and ``a = P - (1 - P) / lam``."""
    damp = np.exp(-lam * dt)
    a = damp - (1 - damp) / lam
    decay = a[None, :] ** (2 * np.asarray(steps)[:, None])
    return decay @ u0**2 + (1 - decay) @ (damp**2 * mu * dt / (1 - a**2))


@pytest.mark.slow
def test_ornstein_uhlenbeck():
    b = build_basis(1.0, 1.0, 32)
    spec = build_noise(PowerFamily(c=1.0, s=2.0), b)
    m = PolyModel(f_coeffs=[-1.0], sigma_coeffs=[1.0])
    cfg = StepperConfig(scheme="exponential_euler", dt=1e-3, T=2.0, record_every=100)
    u0 = Field.mode(b, 1)
    ensemble = run_ensemble(cfg, b, m, spec, u0, 10_000, master_seed=0)
    series = estimate_moments(ensemble, 8, rho_list=[2], h1=False)
    estimate, se = series.lrho(2)
    exact = discrete_ou_second_moment(spec.mu_array, b.lam, u0.coeffs, cfg.dt, cfg.record_steps)
    assert np.all(np.abs(estimate - exact) <= 3 * se + 1e-9)
    # the scheme is first order in dt
    expected = ou_second_moment(spec.mu_array, b.lam + 1, u0.coeffs, series.times)
    assert np.allclose(estimate, expected, rtol=0.05, atol=3 * se.max())


@pytest.mark.slow
def test_dissipativity_allen_cahn():
    b = build_basis(1.0, 1.0, 64)
    spec = build_noise(PowerFamily(c=0.1, s=2.0), b)
    m = PolyModel(f_coeffs=[1.0, 0.0, -1.0], sigma_coeffs=[0.0, 0.25])
    cert = certify_H2(m, 8, spec.theta_m)
    assert cert.verified
    assert cert.c1 == pytest.approx(1.0)
    assert cert.c2 > 0

    cfg = StepperConfig(scheme="tamed_explicit", dt=5e-4, T=5.0, record_every=200)
    u0 = Field.mode(b, 1, 2.0)
    ensemble = run_ensemble(cfg, b, m, spec, u0, 2000, master_seed=0)
    assert not ensemble.blown_up.any()
    series = estimate_moments(ensemble, 8, rho_list=[8, 24], h1=False)
    for rho in (8, 24):
        report = check_energy_inequality(series, cert, rho, lq_moment(b, u0, rho))
        assert report.passed, report.bound_name
        assert report.constants["c1_tilde"] == pytest.approx(rho * cert.c1 / 2)
        assert report.constants["c2_tilde"] == pytest.approx(energy_constants(rho, cert.c1, cert.c2)[1])
    u0_qr = float(lq_moment(b, u0, 24))
    assert u0_qr < np.max(np.abs(u0.values)) ** 24
    report = check_dissipativity(series, cert, 8, 3, u0_qr)
    assert np.isfinite(report.constants["C_hat"])
    assert report.constants["rate"] == pytest.approx(12 * cert.c1)
    assert report.passed


def test_kolmogorov_brownian():
    paths = brownian_paths(1000, 10)
    report = check_kolmogorov(paths, 3, 4, 2, 0.125)
    B = kolmogorov_bound(3, 4, 2, 0.125, 1.0)
    assert B == pytest.approx(768 / (1 - 2 ** (-1 / 8)) ** 4)
    assert report.passed
    assert report.lhs[0] * 10 <= B


def test_noise_truncation_schedule():
    b = build_basis(1.0, 1.0, 256)
    spec = build_noise(PowerFamily(c=1.0, s=2.0), b)
    thetas = np.array([truncate(spec, b, m).theta_m for m in range(1, 400)])
    assert np.all(np.diff(thetas) >= -1e-15)
    assert np.all(thetas <= spec.theta)
    assert thetas[-1] == pytest.approx(spec.theta, rel=0.05)
    # each mode's gap lambda^(-1/2m) - lambda^(-1/m) shrinks once m > ln(lambda_N) / (2 ln 2)
    start = int(np.ceil(np.log(b.lam[-1]) / (2 * np.log(2))))
    gaps = [theta_mn(spec, b, m, 2 * m) for m in range(start, 200)]
    assert np.all(np.diff(gaps) < 0)
    for m in (1, 5, 50):
        assert theta_mn(spec, b, m, m) == 0.0
        assert theta_mn(spec, b, m, 3 * m + 1) <= 2 * spec.theta


@pytest.mark.slow
def test_stopped_process():
    b = build_basis(1.0, 1.0, 16)
    spec = build_noise(PowerFamily(c=0.1, s=2.0), b)
    m = PolyModel(f_coeffs=[1.0, 0.0, -1.0], sigma_coeffs=[0.0, 0.25])
    u0 = Field.mode(b, 1, 2.0)

    cfg = StepperConfig(dt=1e-3, T=0.1, stop_radius_n=1.5, record_every=10)
    ensemble = run_ensemble(cfg, b, m, spec, u0, 8)
    assert np.all(ensemble.tau_n_hit == 0.0)
    assert np.allclose(ensemble.coeffs, u0.coeffs)

    cfg = StepperConfig(dt=1e-3, T=5.0, stop_radius_n=float("inf"), record_every=500)
    ensemble = run_ensemble(cfg, b, m, spec, Field.mode(b, 1, 0.5), 200)
    assert ensemble.hits == 0
    assert not ensemble.blown_up.any()
    cfg = StepperConfig(dt=1e-3, T=5.0, stop_radius_n=3.0, record_every=500)
    ensemble = run_ensemble(cfg, b, m, spec, Field.mode(b, 1, 0.5), 200)
    assert ensemble.hits <= 10


def seeded_models() -> list[tuple[PolyModel, float]]:
    models = []
    for seed in range(4):
        rng = np.random.default_rng(seed)
        beta = int(rng.choice([3, 5]))
        b = rng.uniform(-1, 1, beta)
        b[-1] = -rng.uniform(0.5, 2.0)
        gamma = int(rng.integers(1, (beta + 1) // 2, endpoint=False)) if beta > 3 else 1
        s = rng.uniform(-0.5, 0.5, gamma + 1)
        models.append((PolyModel(f_coeffs=b.tolist(), sigma_coeffs=s.tolist()), float(rng.uniform(0.01, 0.5))))
    # beta + 1 = 2 gamma with a large trace
    models.append((PolyModel(f_coeffs=[0.0, 0.0, -1.0], sigma_coeffs=[0.0, 0.0, 1.0]), 1.0))
    return models


@pytest.mark.parametrize("model,theta", seeded_models())
def test_certification_soundness(model, theta):
    cert = certify_H2(model, 8, theta)
    K = cert.noise_weight
    if cert.status["H2"] == Status.FALSIFIED:
        # no c1 >= 0 helps: g keeps growing towards the grid boundary
        u = np.linspace(-100, 100, 1_000_001)
        g = coercivity_function(model, K, 0.0, u)
        assert np.argmax(g) in (0, len(u) - 1)
        assert model.beta + 1 <= 2 * model.gamma
        return

    plus, minus = coercivity_halves(model, K)
    radius = 1.5 * max(
        1.0,
        polynomial.cauchy_bound(P.polyder(P.polyadd(plus, [0, 0, cert.c1]))),
        polynomial.cauchy_bound(P.polyder(P.polyadd(minus, [0, 0, cert.c1]))),
    )
    scale = max(1.0, abs(cert.c2))
    assert audit_coercivity(model, cert, radius, points=1_000_001) <= 1e-8 * scale
    u = np.linspace(-radius, radius, 1_000_001)
    grid_max = np.max(coercivity_function(model, K, cert.c1, u))
    # the grid gets arbitrarily close to the certified maximum
    assert cert.c2 - grid_max <= 1e-5 * scale
    w = cert.witness("c2")
    assert coercivity_function(model, K, cert.c1, w.u) == pytest.approx(cert.c2, abs=1e-8 * scale)


@pytest.mark.slow
def test_picard_contraction():
    b = build_basis(1.0, 1.0, 16)
    spec = build_noise(PowerFamily(c=0.1, s=2.0), b)
    m = PolyModel(f_coeffs=[1.0, 0.0, -1.0], sigma_coeffs=[0.0, 0.25]).with_cutoff(2.0)
    u0 = Field.mode(b, 1, 0.5)
    dt = 1e-3
    lip = truncated_lipschitz(m)
    budget = contraction_budget(
        lip, 8, 0.2, 0.2, 2.0, spec.theta_m, b.lambda_gap, horizon=1.0, domain_size=b.L
    )
    assert 0 < budget < 1
    T0 = max(budget, dt)
    steps = int(round(T0 / dt))
    rng = RngStream(master_seed=11)
    frozen = freeze_increments(spec, b, dt, steps, rng)
    result = picard_solve(b, m, spec, u0, frozen, steps * dt, dt)
    assert result.converged
    assert np.all(np.asarray(result.ratios) < 1)

    cfg = StepperConfig(scheme="exponential_euler", dt=dt, T=steps * dt)
    path = run_path(cfg, b, m, spec, u0, rng.replay())
    diff = Field.from_coeffs(b, result.trajectory.coeffs - path.states.coeffs)
    assert np.max(sup_norm(b, diff)) < 1e-6

    # contraction holds strictly beyond the analytic budget
    horizon = empirical_contraction_horizon(
        b, m, spec, u0, RngStream(master_seed=11), dt, T0, max_horizon=1.0
    )
    assert horizon > budget
