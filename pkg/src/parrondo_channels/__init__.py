from .channel import ChannelKind, ChannelSpec, PortOutcome, StepResult, Track, step
from .exceptions import ParrondoChannelsError
from .experiment import ExperimentConfig
from .markov import Mod3Chain, StationaryDistribution, analytic_walk, stationary_distribution
from .montecarlo import AggregateStats, SimulationConfig, run_ensemble, run_trajectory


__all__ = [
    "AggregateStats",
    "ChannelKind",
    "ChannelSpec",
    "ExperimentConfig",
    "Mod3Chain",
    "ParrondoChannelsError",
    "PortOutcome",
    "SimulationConfig",
    "StationaryDistribution",
    "StepResult",
    "Track",
    "analytic_walk",
    "run_ensemble",
    "run_trajectory",
    "stationary_distribution",
]
