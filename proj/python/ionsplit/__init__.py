"""Inverse-engineered trap waveforms for fast two-ion separation.

Thin wrapper over the compiled _core module. In an installed wheel _core
sits inside this package; in a development tree it is located through the
IONSPLIT_CORE_DIR environment variable (the CMake build directory).
"""

import importlib
import os
import sys

try:
    from . import _core
except ImportError:  # development layout
    _core_dir = os.environ.get("IONSPLIT_CORE_DIR")
    if not _core_dir:
        raise
    if _core_dir not in sys.path:
        sys.path.insert(0, _core_dir)
    _core = importlib.import_module("_core")

ConfigError = _core.ConfigError
ConvergenceError = _core.ConvergenceError
DomainError = _core.DomainError

TrapSpec = _core.TrapSpec
SeparationDesign = _core.SeparationDesign
ShootingResult = _core.ShootingResult
Waveform = _core.Waveform
ModeSplit = _core.ModeSplit
ExcitationReport = _core.ExcitationReport

make_trap_spec = _core.make_trap_spec
shoot = _core.shoot
sample_design = _core.sample_design
design_waveform = _core.design_waveform
reference_ramp = _core.reference_ramp
simulate_classical_waveform = _core.simulate_classical_waveform
simulate_quantum_waveform = _core.simulate_quantum_waveform
run_experiment = _core.run_experiment
waveform_csv = _core.waveform_csv

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "TrapSpec",
    "SeparationDesign",
    "ShootingResult",
    "Waveform",
    "ModeSplit",
    "ExcitationReport",
    "make_trap_spec",
    "shoot",
    "sample_design",
    "design_waveform",
    "reference_ramp",
    "simulate_classical_waveform",
    "simulate_quantum_waveform",
    "run_experiment",
    "waveform_csv",
]

__version__ = "0.1.0"
