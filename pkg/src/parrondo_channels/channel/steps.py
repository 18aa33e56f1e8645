"""Scalar step functions of the channel family.

Every function is pure: memory goes in, memory comes out, and the randomness
is passed explicitly as unit uniforms. An outcome with probability `p` fires
iff `u < p`. Quantum-track channels are input-oblivious, so the transmitted
state is represented by the symbols Delivered/Erased only.
"""

from .outcome import PortOutcome, Route, StepResult
from .spec import ChannelKind, ChannelSpec
from ..exceptions import ParameterError
from ..utilities import check_probability, check_uniform, residue


def erasure_step(p: float, u: float) -> PortOutcome:
    """One use of the erasure channel N_p: Erased iff u < p."""
    check_probability(p, "p")
    check_uniform(u, "u")
    return PortOutcome.erased() if u < p else PortOutcome.delivered()


def channel_a_step(mem: int, u: float, p_a: float = 0.5) -> StepResult:
    outcome = erasure_step(p_a, u)
    return StepResult(outcome=outcome, memory_after=_moved(mem, outcome))


def channel_p_step(mem: int, u: float, p_b: float = 0.91, p_c: float = 0.26) -> StepResult:
    """N_{p_b} when mem is divisible by 3, N_{p_c} otherwise."""
    outcome = erasure_step(p_b if residue(mem) == 0 else p_c, u)
    return StepResult(outcome=outcome, memory_after=_moved(mem, outcome))


def channel_t_gate(mem: int, m0: int, incoming: PortOutcome) -> PortOutcome:
    """Pass `incoming` through iff mem > m0, otherwise erase it. Never touches memory."""
    return incoming if mem > m0 else PortOutcome.erased()


def channel_t_step(mem: int, m0: int) -> StepResult:
    gate_open = mem > m0
    return StepResult(
        outcome=channel_t_gate(mem, m0, PortOutcome.delivered()),
        memory_after=mem,
        gate_open=gate_open,
    )


def channel_b_step(
    mem: int, m0: int, u: float, p_b: float = 0.91, p_c: float = 0.26
) -> StepResult:
    """P then T; the gate reads the memory after P has updated it."""
    source = channel_p_step(mem, u, p_b, p_c)
    return StepResult(
        outcome=channel_t_gate(source.memory_after, m0, source.outcome),
        memory_after=source.memory_after,
        gate_open=source.memory_after > m0,
    )


def channel_c_step(
    mem: int,
    m0: int,
    lam: float,
    u_route: float,
    u_chan: float,
    p_a: float = 0.5,
    p_b: float = 0.91,
    p_c: float = 0.26,
) -> StepResult:
    """Shared-memory mixture: route A iff u_route < lam, route B otherwise."""
    check_probability(lam, "lambda")
    check_uniform(u_route, "u_route")
    if u_route < lam:
        result = channel_a_step(mem, u_chan, p_a)
        return StepResult(result.outcome, result.memory_after, branch_taken=Route.A)
    result = channel_b_step(mem, m0, u_chan, p_b, p_c)
    return StepResult(
        result.outcome, result.memory_after, branch_taken=Route.B, gate_open=result.gate_open
    )


def classical_a_step(bit: int, mem: int, u: float, p_a: float = 0.5) -> StepResult:
    """Binary symmetric channel with memory: faithful (+1) iff u < 1 - p_a, flipped (-1) otherwise."""
    _check_bit(bit)
    check_probability(p_a, "p_a")
    check_uniform(u, "u")
    if u < 1.0 - p_a:
        return StepResult(PortOutcome.of_bit(bit), mem + 1)
    return StepResult(PortOutcome.of_bit(1 - bit), mem - 1)


def classical_b_step(
    bit: int, mem: int, m0: int, u: float, p_b: float = 0.91, p_c: float = 0.26
) -> StepResult:
    _check_bit(bit)
    source = channel_p_step(mem, u, p_b, p_c)
    payload = source.outcome if source.outcome.is_erased else PortOutcome.of_bit(bit)
    return StepResult(
        outcome=channel_t_gate(source.memory_after, m0, payload),
        memory_after=source.memory_after,
        gate_open=source.memory_after > m0,
    )


def classical_c_step(
    bit: int,
    mem: int,
    m0: int,
    lam: float,
    u_route: float,
    u_chan: float,
    p_a: float = 0.5,
    p_b: float = 0.91,
    p_c: float = 0.26,
) -> StepResult:
    check_probability(lam, "lambda")
    check_uniform(u_route, "u_route")
    if u_route < lam:
        result = classical_a_step(bit, mem, u_chan, p_a)
        return StepResult(result.outcome, result.memory_after, branch_taken=Route.A)
    result = classical_b_step(bit, mem, m0, u_chan, p_b, p_c)
    return StepResult(
        result.outcome, result.memory_after, branch_taken=Route.B, gate_open=result.gate_open
    )


def input_bit(u_bit: float) -> int:
    """Classical input symbol drawn from the third uniform of a draw row."""
    return 1 if u_bit < 0.5 else 0


def step(spec: ChannelSpec, mem: int, u_route: float, u_chan: float, u_bit: float) -> StepResult:
    """One use of the channel described by `spec`, consuming one draw row."""
    bit = input_bit(u_bit)
    match spec.kind:
        case ChannelKind.A:
            return channel_a_step(mem, u_chan, spec.p_a)
        case ChannelKind.P:
            return channel_p_step(mem, u_chan, spec.p_b, spec.p_c)
        case ChannelKind.T:
            return channel_t_step(mem, spec.m0)
        case ChannelKind.B:
            return channel_b_step(mem, spec.m0, u_chan, spec.p_b, spec.p_c)
        case ChannelKind.C_LAMBDA:
            return channel_c_step(
                mem, spec.m0, spec.lam, u_route, u_chan, spec.p_a, spec.p_b, spec.p_c
            )
        case ChannelKind.CLASSICAL_A:
            return classical_a_step(bit, mem, u_chan, spec.p_a)
        case ChannelKind.CLASSICAL_B:
            return classical_b_step(bit, mem, spec.m0, u_chan, spec.p_b, spec.p_c)
        case ChannelKind.CLASSICAL_C:
            return classical_c_step(
                bit, mem, spec.m0, spec.lam, u_route, u_chan, spec.p_a, spec.p_b, spec.p_c
            )


def _moved(mem: int, outcome: PortOutcome) -> int:
    return mem - 1 if outcome.is_erased else mem + 1


def _check_bit(bit: int) -> None:
    if bit not in (0, 1):
        raise ParameterError(f"Input bit must be 0 or 1, got {bit!r}.")
