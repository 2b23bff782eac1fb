from .core_model import (
    InternalLabels,
    PhysicalConfig,
    ScenarioPair,
    ScenarioSpec,
    Stage,
    Statistics,
    Well,
)
from .ensembles import PartitionResult, scenario_partition, zn_ideal
from .errors import GibbsMixingError
from .sweep import SweepRequest, run_sweep
from .thermo import ThermoReport, evaluate_pair
from .verification import run_verify

__all__ = [
    "GibbsMixingError",
    "InternalLabels",
    "PartitionResult",
    "PhysicalConfig",
    "ScenarioPair",
    "ScenarioSpec",
    "Stage",
    "Statistics",
    "SweepRequest",
    "ThermoReport",
    "Well",
    "evaluate_pair",
    "run_sweep",
    "run_verify",
    "scenario_partition",
    "zn_ideal",
]
