from pathlib import Path

import pytest

from spdelab.logic.basis import build_basis
from spdelab.logic.noise import build_noise
from spdelab.model.basis import SpectralBasis
from spdelab.model.noise import NoiseSpec, PowerFamily
from spdelab.model.poly import PolyModel

FIXTURES_PATH = (Path(__file__).parent / "fixtures").absolute()


@pytest.fixture(scope="session")
def fixtures_path() -> Path:
    return FIXTURES_PATH


@pytest.fixture(scope="session")
def experiments_path() -> Path:
    return FIXTURES_PATH / "experiments"


@pytest.fixture
def basis() -> SpectralBasis:
    return build_basis(1.0, 1.0, 16)


@pytest.fixture
def allen_cahn() -> PolyModel:
    """``f(u) = u - u^3``, ``sigma(u) = u / 4``"""
    return PolyModel(f_coeffs=[1.0, 0.0, -1.0], sigma_coeffs=[0.0, 0.25])


@pytest.fixture
def noise(basis) -> NoiseSpec:
    return build_noise(PowerFamily(c=0.1, s=2.0), basis)
