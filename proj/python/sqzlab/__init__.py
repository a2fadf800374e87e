"""Multimode squeezed-light laboratory: simulation and reconstruction."""

from ._core import (
    AngularGrid,
    ConfigError,
    DataError,
    DegenerateDataError,
    ExperimentConfig,
    FrameEnsemble,
    Fringe,
    FringeReconstruction,
    FullAnalysis,
    InterferometerModel,
    ModeBasis,
    ModeReconstruction,
    ModeSqueezing,
    ModeTruth,
    PhaseScanResult,
    SqueezingReport,
    acquire_ensemble,
    analyze_seed,
    build_collinear_model,
    build_model,
    collinear_squeezing,
    ground_truth_squeezing,
    mode_photon_numbers,
    phase_scan,
    read_ensemble,
    reconstruct_fringe,
    run_full_analysis,
    write_ensemble,
)

__all__ = [
    "AngularGrid",
    "ConfigError",
    "DataError",
    "DegenerateDataError",
    "ExperimentConfig",
    "FrameEnsemble",
    "Fringe",
    "FringeReconstruction",
    "FullAnalysis",
    "InterferometerModel",
    "ModeBasis",
    "ModeReconstruction",
    "ModeSqueezing",
    "ModeTruth",
    "PhaseScanResult",
    "SqueezingReport",
    "acquire_ensemble",
    "analyze_seed",
    "build_collinear_model",
    "build_model",
    "collinear_squeezing",
    "ground_truth_squeezing",
    "mode_photon_numbers",
    "phase_scan",
    "read_ensemble",
    "reconstruct_fringe",
    "run_full_analysis",
    "write_ensemble",
]
