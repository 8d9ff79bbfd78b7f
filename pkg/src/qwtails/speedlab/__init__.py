"""Experiment harness: convergence-speed sweeps, identity checks and the CLI."""

from .sweep import ExperimentConfig, SpeedRecord, format_csv, run_sweep
from .verify import Check, VerifyReport, verify_suite

__all__ = [
    "ExperimentConfig",
    "SpeedRecord",
    "run_sweep",
    "format_csv",
    "Check",
    "VerifyReport",
    "verify_suite",
]
