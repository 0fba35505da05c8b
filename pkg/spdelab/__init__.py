"""Stochastic reaction-diffusion experiments on a spectral basis."""

from spdelab.core.config import load_config
from spdelab.logic.basis import build_basis
from spdelab.logic.certify import certify, certify_H2, certify_H3
from spdelab.logic.ensemble import run_ensemble
from spdelab.logic.integrate import run_path, step
from spdelab.logic.moments import estimate_moments
from spdelab.logic.noise import build_noise
from spdelab.logic.picard import picard_solve
from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.noise import NoiseSpec, RngStream
from spdelab.model.path import Scheme, StepperConfig
from spdelab.model.poly import PolyModel

__version__ = "0.1.0"

__all__ = [
    "Field",
    "NoiseSpec",
    "PolyModel",
    "RngStream",
    "Scheme",
    "SpectralBasis",
    "StepperConfig",
    "build_basis",
    "build_noise",
    "certify",
    "certify_H2",
    "certify_H3",
    "estimate_moments",
    "load_config",
    "picard_solve",
    "run_ensemble",
    "run_path",
    "step",
]
