from .config import SimulationConfig
from .ensemble import (
    BATCH_TRIALS,
    effective_erasure_profile,
    empirical_stationary,
    late_flip_rate,
    late_window,
    run_ensemble,
)
from .stats import AggregateStats, ExceedancePoint, WindowRate
from .tally import EnsembleTally
from .trajectory import DRAW_BLOCK, TrajectoryRecord, run_trajectory, write_trajectory_csv
from .verdict import DriftEstimate, ParrondoVerdict, parrondo_verdict

__all__ = [
    "AggregateStats",
    "BATCH_TRIALS",
    "DRAW_BLOCK",
    "DriftEstimate",
    "EnsembleTally",
    "ExceedancePoint",
    "ParrondoVerdict",
    "SimulationConfig",
    "TrajectoryRecord",
    "WindowRate",
    "effective_erasure_profile",
    "empirical_stationary",
    "late_flip_rate",
    "late_window",
    "parrondo_verdict",
    "run_ensemble",
    "run_trajectory",
    "write_trajectory_csv",
]
