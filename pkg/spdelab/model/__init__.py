"""Data models for spdelab."""

from spdelab.model.basis import Field, SpectralBasis
from spdelab.model.job import ExitCode, ExperimentJob
from spdelab.model.noise import ListFamily, NoiseSpec, PowerFamily, RngStream
from spdelab.model.path import (
    ContractionReport,
    EnsembleResult,
    PathResult,
    PicardResult,
    Scheme,
    StepperConfig,
)
from spdelab.model.poly import HypothesisCertificate, PolyModel, Status, Witness
from spdelab.model.probe import BoundReport, MomentSeries, SimulationReport

__all__ = [
    # Basis
    "Field",
    "SpectralBasis",
    # Noise
    "ListFamily",
    "NoiseSpec",
    "PowerFamily",
    "RngStream",
    # Nonlinearities
    "HypothesisCertificate",
    "PolyModel",
    "Status",
    "Witness",
    # Paths
    "ContractionReport",
    "EnsembleResult",
    "PathResult",
    "PicardResult",
    "Scheme",
    "StepperConfig",
    # Probes
    "BoundReport",
    "MomentSeries",
    "SimulationReport",
    # Jobs
    "ExitCode",
    "ExperimentJob",
]
