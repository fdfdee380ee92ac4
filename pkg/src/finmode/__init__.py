"""Finite-mode Euler and rotating Navier-Stokes flows: fields, dynamics, classification."""
from .field import (
    SchemaError,
    SpectralField,
    ValidationReport,
    ZeroModeTrajectory,
    curl,
    energy,
    evaluate,
    helicity,
    parse,
    remove_mean_drift,
    restore_mean_drift,
    serialize,
    validate,
)

__all__ = [
    "SchemaError",
    "SpectralField",
    "ValidationReport",
    "ZeroModeTrajectory",
    "curl",
    "energy",
    "evaluate",
    "helicity",
    "parse",
    "remove_mean_drift",
    "restore_mean_drift",
    "serialize",
    "validate",
]
__version__ = "0.1.0"
