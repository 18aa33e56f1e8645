import attrs
import csv
from pathlib import Path
from typing import Iterable

import numpy as np

from ..channel.outcome import (
    GATE_OPEN,
    GATE_UNDEFINED,
    ROUTE_A_CODE,
    ROUTE_B_CODE,
    PortOutcome,
    gate_code,
    route_code,
)
from ..channel.spec import ChannelSpec
from ..channel.steps import step
from ..exceptions import ConfigurationError


# Rows of (u_route, u_chan, u_bit) are drawn from each trajectory's generator in blocks of this size.
DRAW_BLOCK = 1024

CSV_COLUMNS = ("trial", "step", "memory", "outcome", "branch", "gate_open")


def draw_rows(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.random((size, 3))


@attrs.frozen
class TrajectoryRecord:
    """Realization of one trajectory: the memory walk and the symbol of every use."""

    memory_path: np.ndarray = attrs.field(eq=False)
    outcome_codes: np.ndarray = attrs.field(eq=False)
    routes: np.ndarray = attrs.field(eq=False)
    gates: np.ndarray = attrs.field(eq=False)

    def __attrs_post_init__(self):
        if len(self.memory_path) != len(self.outcome_codes) + 1:
            raise ValueError("Memory path must be one longer than the outcome sequence.")
        if len(self.memory_path) > 1 and np.abs(np.diff(self.memory_path)).max() > 1:
            raise ValueError("Memory may move by at most one per use.")

    @property
    def outcomes(self) -> list[PortOutcome]:
        return [PortOutcome.from_code(int(code)) for code in self.outcome_codes]

    @property
    def gate_openings(self) -> int:
        return int((self.gates == GATE_OPEN).sum())

    def same_as(self, other: "TrajectoryRecord") -> bool:
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("memory_path", "outcome_codes", "routes", "gates")
        )


def run_trajectory(spec: ChannelSpec, uses: int, seed: int) -> TrajectoryRecord:
    """Drive the scalar step functions through `uses` channel uses.

    A deterministic function of (spec, uses, seed); the generator is consumed
    in the same block layout as the vectorized ensemble.
    """
    if not isinstance(spec, ChannelSpec):
        raise ConfigurationError(f"Expected a ChannelSpec, got {type(spec).__name__}.")
    if uses < 0:
        raise ConfigurationError(f"'uses' must be nonnegative, got {uses}.")

    rng = np.random.default_rng(seed)
    memory = np.empty(uses + 1, dtype=np.int64)
    codes = np.empty(uses, dtype=np.int8)
    routes = np.empty(uses, dtype=np.int8)
    gates = np.empty(uses, dtype=np.int8)

    mem = memory[0] = spec.initial_memory
    for block_start in range(0, uses, DRAW_BLOCK):
        draws = draw_rows(rng, min(DRAW_BLOCK, uses - block_start))
        for j, (u_route, u_chan, u_bit) in enumerate(draws):
            t = block_start + j
            result = step(spec, int(mem), float(u_route), float(u_chan), float(u_bit))
            mem = memory[t + 1] = result.memory_after
            codes[t] = result.outcome.code
            routes[t] = route_code(result.branch_taken)
            gates[t] = gate_code(result.gate_open)

    return TrajectoryRecord(memory_path=memory, outcome_codes=codes, routes=routes, gates=gates)


def write_trajectory_csv(records: Iterable[tuple[int, TrajectoryRecord]], path: str | Path) -> Path:
    """One row per channel use: memory after the use, symbol, route and gate state."""
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for trial, record in records:
            for t, code in enumerate(record.outcome_codes):
                writer.writerow(
                    [
                        trial,
                        t + 1,
                        int(record.memory_path[t + 1]),
                        str(PortOutcome.from_code(int(code))),
                        _route_label(int(record.routes[t])),
                        _gate_label(int(record.gates[t])),
                    ]
                )
    return path


def _route_label(code: int) -> str:
    return {ROUTE_A_CODE: "A", ROUTE_B_CODE: "B"}.get(code, "")


def _gate_label(code: int) -> str:
    return "" if code == GATE_UNDEFINED else ("true" if code == GATE_OPEN else "false")
