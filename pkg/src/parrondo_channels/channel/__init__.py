from .kernels import BatchStep, ChannelKernel, kernel_for, kernel_registry
from .outcome import Outcome, PortOutcome, Route, StepResult
from .spec import ChannelKind, ChannelSpec, Track
from .steps import (
    channel_a_step,
    channel_b_step,
    channel_c_step,
    channel_p_step,
    channel_t_gate,
    channel_t_step,
    classical_a_step,
    classical_b_step,
    classical_c_step,
    erasure_step,
    input_bit,
    step,
)


__all__ = [
    "BatchStep",
    "ChannelKernel",
    "ChannelKind",
    "ChannelSpec",
    "Outcome",
    "PortOutcome",
    "Route",
    "StepResult",
    "Track",
    "channel_a_step",
    "channel_b_step",
    "channel_c_step",
    "channel_p_step",
    "channel_t_gate",
    "channel_t_step",
    "classical_a_step",
    "classical_b_step",
    "classical_c_step",
    "erasure_step",
    "input_bit",
    "kernel_for",
    "kernel_registry",
    "step",
]
