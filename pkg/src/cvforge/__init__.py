"""cvforge: learn short-depth continuous-variable photonic circuits.

A truncated-Fock-basis simulator plus an adjoint-gradient Adam trainer that
discovers circuits preparing target quantum states or synthesising target
unitary gates. See the README for the CLI and bundled experiment configs.
"""

from . import diagnostics, fock, gates, network, objective, optimizer, targets
from .network import NetworkParams, init_params
from .objective import ObjectiveSpec, build_objective
from .optimizer import AdamConfig, NetworkShape, RunRecord, multi_run, run
from .targets import TargetSpec

__version__ = "0.1.0"

__all__ = [
    "fock",
    "gates",
    "network",
    "targets",
    "objective",
    "optimizer",
    "diagnostics",
    "NetworkParams",
    "init_params",
    "ObjectiveSpec",
    "build_objective",
    "AdamConfig",
    "NetworkShape",
    "RunRecord",
    "run",
    "multi_run",
    "TargetSpec",
    "__version__",
]
