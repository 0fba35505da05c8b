import numpy as np
import pytest
from scipy import special

from spdelab.exceptions import InvalidDimensionError
from spdelab.logic.basis import build_basis
from spdelab.logic.noise import (
    NoiseStream,
    build_noise,
    sample_increment,
    scale_noise,
    theta_mn,
    truncate,
)
from spdelab.model.noise import ListFamily, PowerFamily, RngStream


def test_build_noise_power(basis, noise):
    j = np.arange(1, basis.N + 1)
    assert np.allclose(noise.mu, 0.1 * j**-2.0)
    assert noise.e_sup2 == pytest.approx(2.0)
    assert noise.theta == pytest.approx(2 * 0.1 * np.sum(j**-2.0))
    assert noise.tail_theta == pytest.approx(2 * 0.1 * special.zeta(2, basis.N + 1))
    # full trace of the infinite sequence
    assert noise.theta + noise.tail_theta == pytest.approx(2 * 0.1 * np.pi**2 / 6)
    assert noise.theta_m == noise.theta
    assert noise.effective_delta == 0.5
    assert noise.omega == pytest.approx(np.sum(np.asarray(noise.mu) ** 2) * np.sqrt(2))
    assert not noise.is_zero


def test_build_noise_list(basis):
    spec = build_noise({"type": "list", "values": [1.0, 0.5, 0.0, 0.25]}, basis)
    assert isinstance(spec.family, ListFamily)
    assert spec.mu[:4] == [1.0, 0.5, 0.0, 0.25]
    assert not any(spec.mu[4:])
    assert spec.tail_theta == 0.0

    long = build_noise(ListFamily(values=[1.0] * (basis.N + 2)), basis)
    assert long.tail_theta == pytest.approx(2 * 2.0)

    zero = build_noise(PowerFamily(c=0.0), basis)
    assert zero.is_zero
    assert zero.theta == 0.0


def test_noise_family_validation():
    with pytest.raises(ValueError):
        PowerFamily(c=1.0, s=1.0)
    with pytest.raises(ValueError):
        PowerFamily(c=-1.0)
    with pytest.raises(ValueError):
        ListFamily(values=[1.0, -0.1])


def test_scale_noise(noise):
    doubled = scale_noise(noise, 2.0)
    assert doubled.theta == pytest.approx(2 * noise.theta)
    assert doubled.family.c == pytest.approx(0.2)
    assert scale_noise(noise, 0.0).is_zero
    with pytest.raises(ValueError):
        scale_noise(noise, -1.0)


def test_truncate(basis, noise):
    spec = truncate(noise, basis, 4)
    assert spec.truncation_m == 4
    assert spec.effective_delta == 0.25
    assert spec.theta_m < spec.theta
    assert spec.theta == noise.theta
    # modes with lambda_j <= 1 are kept untouched, here none
    assert np.allclose(spec.effective_mu, basis.lam**-0.25 * noise.mu_array)
    assert theta_mn(noise, basis, 3, 3) == 0.0
    assert theta_mn(noise, basis, 2, 5) > 0
    with pytest.raises(ValueError):
        truncate(noise, basis, 0)
    with pytest.raises(InvalidDimensionError):
        truncate(noise, build_basis(1.0, 1.0, 8), 2)


def test_rng_stream_reproducible():
    a = RngStream(master_seed=7, path_index=3)
    b = RngStream(master_seed=7, path_index=3)
    c = RngStream(master_seed=7, path_index=4)
    first = a.normals(5)
    assert np.array_equal(first, b.normals(5))
    assert not np.array_equal(first, c.normals(5))
    assert a.step_counter == 1
    assert np.array_equal(a.replay().normals(5), first)


def test_noise_stream_matches_rng_stream():
    stream = NoiseStream(7, [0, 3], 5, block_steps=16)
    rng = RngStream(master_seed=7, path_index=3, block_steps=16)
    for step in range(40):  # crosses two counter blocks
        assert np.array_equal(stream.normals(step)[1], rng.normals(5))
    # blocks can be revisited in any order
    assert np.array_equal(stream.normals(3)[1], RngStream(
        master_seed=7, path_index=3, block_steps=16, step_counter=3
    ).normals(5))


def test_sample_increment(basis, noise):
    rng = RngStream(master_seed=1)
    dW = sample_increment(noise, basis, 0.01, rng)
    replay = RngStream(master_seed=1).normals(basis.N)
    assert np.allclose(dW.coeffs, np.sqrt(noise.mu_array * 0.01) * replay)
    assert rng.step_counter == 1
    with pytest.raises(ValueError):
        sample_increment(noise, basis, 0.0, rng)


def test_increment_variance(basis, noise):
    stream = NoiseStream(0, range(4000), basis.N)
    dW = stream.increments(noise, 0.01, 0)
    var = dW.var(axis=0)
    expected = noise.mu_array * 0.01
    assert np.allclose(var[:4], expected[:4], rtol=0.1)
