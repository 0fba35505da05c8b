import numpy as np
import pytest

from spdelab.exceptions import InadmissibleParameterError, MissingMomentError
from spdelab.logic.bounds import (
    chaining_constant,
    check_dissipativity,
    check_energy_inequality,
    check_kolmogorov,
    energy_constants,
    kolmogorov_bound,
    regularity_probe,
    sup_moment_bound,
)
from spdelab.logic.certify import certify_H2
from spdelab.logic.holder import brownian_paths
from spdelab.model.poly import HypothesisCertificate, PolyModel
from spdelab.model.probe import BoundReport, MomentSeries, Verdict


@pytest.fixture
def cert(allen_cahn) -> HypothesisCertificate:
    return certify_H2(allen_cahn, 8, 0.3259)


def make_series(times, c0=None, lrho=None, h1=None, q=8.0, se=0.01) -> MomentSeries:
    times = np.asarray(times, dtype=float)
    c0 = np.ones_like(times) if c0 is None else np.asarray(c0, dtype=float)
    series = MomentSeries(
        times=times, q=q, M=100, m_c0_q=c0, m_c0_q_se=np.full_like(times, se)
    )
    for rho, values in (lrho or {}).items():
        series.m_lrho_rho[rho] = np.asarray(values, dtype=float)
        series.m_lrho_rho_se[rho] = np.full_like(times, se)
    if h1 is not None:
        series.m_h1_q = np.asarray(h1, dtype=float)
        series.m_h1_q_se = np.full_like(times, se)
    return series


def test_bound_report():
    report = BoundReport.make("x", [0, 1], [1.0, 2.0], [1.5, 2.0], [0.0, 0.1])
    assert report.verdict == Verdict.PASS
    assert report.margin == pytest.approx(0.0)
    report = BoundReport.make("x", [0, 1], [1.0, 2.5], 2.0, [0.0, 0.1], B=3)
    assert not report.passed
    assert report.margin == pytest.approx(-0.5)
    assert report.constants == {"B": 3.0}
    assert BoundReport.make("x", [0], [5.0], [1.0], verdict=True).passed


def test_energy_constants():
    c1t, c2t = energy_constants(8, 1.0, 0.25)
    assert c1t == 4.0
    assert c2t == pytest.approx(2 * 1.5**0.75 * 0.25**4)
    assert c2t == pytest.approx(0.010589, abs=1e-6)
    # domain size scales the constant term
    assert energy_constants(8, 1.0, 0.25, 2.0)[1] == pytest.approx(2 * c2t)
    with pytest.raises(InadmissibleParameterError):
        energy_constants(2, 1.0, 1.0)


def test_check_energy_inequality(cert):
    ct1, ct2 = energy_constants(8, cert.c1, cert.c2)
    times = np.linspace(0, 2, 5)
    u0 = 0.5
    bound = u0 * np.exp(-ct1 * times) + ct2 / ct1
    series = make_series(times, lrho={8.0: 0.9 * bound})
    report = check_energy_inequality(series, cert, 8, u0)
    assert report.passed
    assert report.bound_name == "energy_L8"
    assert report.constants["plateau"] == pytest.approx(ct2 / ct1)
    assert np.allclose(report.rhs, bound)

    series = make_series(times, lrho={8.0: 2 * bound + 1})
    assert not check_energy_inequality(series, cert, 8, u0).passed
    with pytest.raises(MissingMomentError):
        check_energy_inequality(series, cert, 24, u0)

    falsified = certify_H2(PolyModel(f_coeffs=[1.0]), 8, 0.1)
    with pytest.raises(ValueError):
        check_energy_inequality(series, falsified, 8, u0)


def test_check_dissipativity(cert):
    times = np.linspace(0, 4, 17)
    decaying = make_series(times, c0=1 + np.exp(-times))
    report = check_dissipativity(decaying, cert, 8, 3, 2.0)
    assert report.passed
    assert report.times[0] == 1.0
    assert 0 < report.constants["C_hat"] < np.inf
    assert report.constants["rate"] == pytest.approx(12 * cert.c1)

    growing = make_series(times, c0=np.exp(2 * times))
    assert not check_dissipativity(growing, cert, 8, 3, 2.0).passed

    with pytest.raises(InadmissibleParameterError):
        check_dissipativity(make_series(np.linspace(0, 0.5, 5)), cert, 8, 3, 2.0)


def test_kolmogorov_constants():
    B = kolmogorov_bound(3, 4, 2, 0.125, 1.0)
    assert B == pytest.approx(768 / (1 - 2**-0.125) ** 4)
    assert B == pytest.approx(1.6186e7, rel=1e-3)
    assert kolmogorov_bound(3, 4, 2, 0.125, 2.0) == pytest.approx(4 * B)
    with pytest.raises(InadmissibleParameterError):
        kolmogorov_bound(3, 4, 2, 0.25, 1.0)
    with pytest.raises(InadmissibleParameterError):
        kolmogorov_bound(3, 1, 2, 0.1, 1.0)

    assert chaining_constant(4, 2, 2.5) == pytest.approx(256 / (1 - 2**-0.125) ** 4)
    with pytest.raises(InadmissibleParameterError):
        chaining_constant(4, 2, 3.0)
    assert sup_moment_bound(3, 4, 2, 1.0, 1.0) == pytest.approx(
        8 * (3 * chaining_constant(4, 2, 2.5) + 1)
    )


def test_check_kolmogorov():
    paths = brownian_paths(1000, 8)
    report = check_kolmogorov(paths, 3, 4, 2, 0.125)
    assert report.passed
    assert report.bound_name == "kolmogorov"
    assert report.constants["B"] == pytest.approx(kolmogorov_bound(3, 4, 2, 0.125, 1))
    # the empirical moment is orders of magnitude below B
    assert report.constants["ratio"] > 100
    assert report.constants["sup_moment"] <= report.constants["sup_bound"]

    # grid states in the sup norm
    grid = np.stack([paths, -0.5 * paths], axis=-1)
    report = check_kolmogorov(grid, 3, 4, 2, 0.125, grid=True)
    assert report.passed

    # a path with a jump has no finite Hoelder seminorm bound
    jumps = np.zeros((10, 257))
    jumps[:, 128:] = 1000.0
    assert not check_kolmogorov(jumps, 3, 4, 2, 0.125).passed


def test_regularity_probe():
    times = np.linspace(0, 2, 21)
    series = make_series(times, h1=3 * (times**0.5 + 1))
    report = regularity_probe(series)
    assert report.passed
    assert 0 < report.constants["kappa_hat"] < 7
    assert report.constants["C_hat"] == pytest.approx(3.0, rel=0.1)
    assert np.all(np.asarray(report.rhs) >= np.asarray(report.lhs) - 1e-12)
    with pytest.raises(MissingMomentError):
        regularity_probe(make_series(times))
