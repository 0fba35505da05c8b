import numpy as np
import pytest

from spdelab.exceptions import InvalidDimensionError
from spdelab.logic.basis import build_basis
from spdelab.model.basis import Field, SpectralBasis, min_grid_size


def test_min_grid_size():
    assert min_grid_size(64) == 96
    assert min_grid_size(5) == 8
    assert min_grid_size(1) == 2


def test_basis_dealiasing():
    with pytest.raises(ValueError):
        SpectralBasis(L=1.0, a0=1.0, N=16, G=20)
    b = SpectralBasis(L=1.0, a0=1.0, N=16, G=24)
    assert b.key == build_basis(1.0, 1.0, 16).key


def test_basis_eigenpairs(basis):
    assert basis.lam[0] == pytest.approx(np.pi**2)
    assert basis.lam[3] == pytest.approx(16 * np.pi**2)
    assert np.all(np.diff(basis.lam) > 0)
    assert basis.lambda_gap == pytest.approx(np.pi**2 / 2)
    assert basis.supnorm_e == pytest.approx(np.sqrt(2))
    # the grid excludes both endpoints
    assert basis.grid[0] > 0 and basis.grid[-1] < basis.L
    gram = basis.eigenfunctions.T @ basis.eigenfunctions * basis.dx
    assert np.allclose(gram, np.eye(basis.N), atol=1e-13)


def test_field_dual_representation(basis):
    rng = np.random.default_rng(1)
    coeffs = rng.normal(size=basis.N)
    u = Field.from_coeffs(basis, coeffs)
    assert np.allclose(u.values, basis.eigenfunctions @ coeffs, atol=1e-13)
    v = Field.from_values(basis, u.values)
    assert np.allclose(v.coeffs, coeffs, atol=1e-13)


def test_field_batches(basis):
    coeffs = np.zeros((3, 5, basis.N))
    coeffs[..., 0] = 1.0
    u = Field.from_coeffs(basis, coeffs)
    assert u.batch_shape == (3, 5)
    assert len(u) == 3
    assert u.values.shape == (3, 5, basis.G)
    assert u[1].batch_shape == (5,)
    assert Field.mode(basis, 1).batch_shape == ()


def test_field_arithmetic(basis):
    e1 = Field.mode(basis, 1)
    e2 = Field.mode(basis, 2, 2.0)
    w = e1 + e2
    assert np.allclose(w.coeffs[:2], [1.0, 2.0])
    assert np.allclose((w - e1).coeffs, e2.coeffs)
    assert np.allclose((2 * e1).coeffs[0], 2.0)
    assert np.allclose((-e1).coeffs[0], -1.0)
    # operations never mutate their inputs
    assert e1.coeffs[0] == 1.0


def test_field_errors(basis):
    with pytest.raises(InvalidDimensionError):
        Field.from_coeffs(basis, np.zeros(basis.N + 1))
    with pytest.raises(InvalidDimensionError):
        Field.from_values(basis, np.zeros(basis.N))
    with pytest.raises(InvalidDimensionError):
        Field.mode(basis, 0)
    with pytest.raises(ValueError):
        Field(basis)
    other = build_basis(2.0, 1.0, 16)
    with pytest.raises(InvalidDimensionError):
        Field.mode(basis, 1) + Field.mode(other, 1)
