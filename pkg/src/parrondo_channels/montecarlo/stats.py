import attrs
from typing import Any

import numpy as np

from ..channel.spec import ChannelSpec
from ..utilities import binomial_stderr, mean_and_stderr
from .config import SimulationConfig
from .tally import EnsembleTally
from .trajectory import TrajectoryRecord


@attrs.frozen
class WindowRate:
    start: int
    stop: int
    rate: float
    stderr: float


@attrs.frozen
class ExceedancePoint:
    step: int
    threshold: int
    rate: float
    stderr: float


@attrs.frozen
class AggregateStats:
    """Summary of an ensemble, derived deterministically from its tally.

    `gate_open_rate` counts only uses that passed through a T gate, so for a
    mixture it is the open share of its route-B uses. `flip_rate_by_window`
    holds the flip share of delivered classical symbols per statistics window
    (None where nothing was delivered).
    """

    spec: ChannelSpec
    uses: int
    trials: int
    burn_in: int
    window: int
    mean_final_memory: float
    final_memory_stderr: float
    empirical_drift_per_step: float | None
    drift_stderr: float | None
    overall_delivery_rate: float | None
    overall_delivery_stderr: float | None
    delivery_rate_by_window: tuple[WindowRate, ...]
    residue_occupancy: tuple[float, float, float] | None
    residue_stderr: tuple[float, float, float] | None
    occupancy_by_window: tuple[tuple[float, float, float] | None, ...]
    exceedance: tuple[ExceedancePoint, ...]
    max_exceedance_rate: float
    gate_open_rate: float | None
    flip_rate: float | None
    flip_stderr: float | None
    flip_rate_by_window: tuple[float | None, ...]
    tally: EnsembleTally = attrs.field(repr=False, eq=False)
    trajectories: tuple[TrajectoryRecord, ...] | None = attrs.field(default=None, repr=False, eq=False)

    @classmethod
    def from_tally(
        cls,
        config: SimulationConfig,
        tally: EnsembleTally,
        trajectories: tuple[TrajectoryRecord, ...] | None = None,
    ) -> "AggregateStats":
        n, trials = config.uses, tally.trials
        burn_in = min(config.effective_burn_in, n)
        window = config.effective_window

        mean_final, final_stderr = mean_and_stderr(tally.final_sum, tally.final_sumsq, trials)
        if n > 0:
            drift = (mean_final - config.spec.initial_memory) / n
            drift_stderr = final_stderr / n
            rate, rate_stderr = mean_and_stderr(tally.delivered_sum, tally.delivered_sumsq, trials)
            rate, rate_stderr = rate / n, rate_stderr / n
        else:
            drift = drift_stderr = rate = rate_stderr = None

        windows = []
        for w, (total, total_sq) in enumerate(zip(tally.window_sum, tally.window_sumsq)):
            start, stop = w * window, min((w + 1) * window, n)
            mean, stderr = mean_and_stderr(int(total), int(total_sq), trials)
            windows.append(WindowRate(start, stop, mean / (stop - start), stderr / (stop - start)))

        occupancy = occupancy_stderr = None
        late_steps = n - burn_in
        if late_steps > 0:
            pairs = [
                mean_and_stderr(int(total), int(total_sq), trials)
                for total, total_sq in zip(tally.residue_sum, tally.residue_sumsq)
            ]
            occupancy = tuple(mean / late_steps for mean, _ in pairs)
            occupancy_stderr = tuple(stderr / late_steps for _, stderr in pairs)

        by_window = tuple(
            tuple(float(c) / row.sum() for c in row) if row.sum() > 0 else None
            for row in tally.residue_by_window
        )

        exceedance = []
        for i, step in enumerate(config.effective_checkpoints):
            for j, threshold in enumerate(config.effective_thresholds):
                share = int(tally.exceedance_counts[i, j]) / trials
                exceedance.append(ExceedancePoint(step, threshold, share, binomial_stderr(share, trials)))

        # share of gated uses (route B uses for mixtures) that found the gate open
        gate_rate = None
        if config.spec.kind.has_gate and tally.gated_uses > 0:
            gate_rate = tally.gate_openings / tally.gated_uses

        flip_rate = flip_stderr = None
        if tally.classical_delivered > 0:
            flip_rate = tally.flips / tally.classical_delivered
            flip_stderr = binomial_stderr(flip_rate, tally.classical_delivered)
        flips_by_window = tuple(
            int(f) / int(d) if d > 0 else None for f, d in zip(tally.window_flips, tally.window_classical_delivered)
        )

        return cls(
            spec=config.spec,
            uses=n,
            trials=trials,
            burn_in=burn_in,
            window=window,
            mean_final_memory=mean_final,
            final_memory_stderr=final_stderr,
            empirical_drift_per_step=drift,
            drift_stderr=drift_stderr,
            overall_delivery_rate=rate,
            overall_delivery_stderr=rate_stderr,
            delivery_rate_by_window=tuple(windows),
            residue_occupancy=occupancy,
            residue_stderr=occupancy_stderr,
            occupancy_by_window=by_window,
            exceedance=tuple(exceedance),
            max_exceedance_rate=tally.max_exceedance_count / trials,
            gate_open_rate=gate_rate,
            flip_rate=flip_rate,
            flip_stderr=flip_stderr,
            flip_rate_by_window=flips_by_window,
            tally=tally,
            trajectories=trajectories,
        )

    def delivery_by_position(self) -> np.ndarray:
        return self.tally.delivered_by_position / self.trials

    def to_dict(self) -> dict[str, Any]:
        d = attrs.asdict(
            self,
            recurse=True,
            filter=lambda attribute, _: attribute.name not in ("tally", "trajectories", "spec"),
        )
        d["spec"] = self.spec.to_dict()
        return d
