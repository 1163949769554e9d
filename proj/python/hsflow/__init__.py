"""Hypersymplectic flow laboratory.

Thin layer over the C++ core: pointwise triple algebra and G2 lift, lattice
fields as numpy arrays, and the verify/flow/lift/report operations.
"""

import json
from pathlib import Path

from ._core import (
    DetNotOne,
    Error,
    IoError,
    NotPositive,
    SingularMatrix,
    StepRejected,
    ValidationError,
    dual_triple,
    gram,
    generate_initial,
    hodge2,
    lift,
    max_dw,
    metric_from_triple,
    normalize,
    periods,
    read_snapshot,
    rhs,
    set_workers,
    standard_triple,
    wedge22,
    workers,
    write_snapshot,
)
from . import _core

__all__ = [
    "DetNotOne", "Error", "IoError", "NotPositive", "SingularMatrix", "StepRejected", "ValidationError",
    "config_hash", "dual_triple", "flow", "generate_initial", "gram", "hodge2", "lift", "lift_snapshot",
    "max_dw", "metric_from_triple", "normalize", "periods", "read_snapshot", "report", "rhs", "set_workers",
    "standard_triple", "verify", "wedge22", "workers", "write_snapshot",
]


def verify(trials=1000, seed=1):
    """Randomised identity suites; dict with per-identity residuals and 'pass'."""
    return json.loads(_core._verify(trials, seed))


def flow(config, out):
    """Run a configuration into directory `out`; returns the exit code (0 ok, 2 aborted)."""
    return _core._flow(Path(config), Path(out))


def lift_snapshot(snapshot, samples=64, seed=1):
    return _core._lift_snapshot(Path(snapshot), samples, seed)


def report(run_dir):
    """Summary of a run directory (what `hsflow report` writes to summary.json)."""
    return json.loads(_core._summarize_run(Path(run_dir)))


def config_hash(config):
    return _core._config_hash(Path(config))
