"""Ensemble runner.

Trajectory i always draws from its own generator seeded with
derive_seed(base_seed, i). Trials are cut into fixed-size batches, each batch
is advanced in lockstep by the vectorized kernel, and the per-batch tallies are
merged in batch order, so results depend on neither the worker count nor the
batch boundaries.
"""

import logging
import math
import multiprocessing
from typing import Sequence

import numpy as np

from ..channel.kernels import kernel_for
from ..channel.outcome import ERASED_CODE, GATE_OPEN, GATE_UNDEFINED
from ..decorators.caching import cache_ensemble
from ..exceptions import InsufficientSamplesError, ParameterError
from ..markov import StationaryDistribution
from ..utilities import binomial_stderr, derive_seed
from .config import SimulationConfig
from .stats import AggregateStats, WindowRate
from .tally import EnsembleTally
from .trajectory import DRAW_BLOCK, TrajectoryRecord, draw_rows


BATCH_TRIALS = 1024


def _run_batch(config: SimulationConfig, start: int, stop: int) -> tuple[EnsembleTally, list[TrajectoryRecord]]:
    spec, n, k = config.spec, config.uses, stop - start
    kernel = kernel_for(spec)
    rngs = [np.random.default_rng(derive_seed(config.base_seed, i)) for i in range(start, stop)]

    burn_in = min(config.effective_burn_in, n)
    window = config.effective_window
    n_windows = math.ceil(n / window) if n > 0 else 0
    checkpoints = {t: row for row, t in enumerate(config.effective_checkpoints)}
    thresholds = np.asarray(config.effective_thresholds, dtype=np.int64)

    mem = np.full(k, spec.initial_memory, dtype=np.int64)
    running_max = mem.copy()
    rows = np.arange(k)

    delivered_by_position = np.zeros(n, dtype=np.int64)
    window_counts = np.zeros((k, n_windows), dtype=np.int64)
    residue_counts = np.zeros((k, 3), dtype=np.int64)
    residue_by_window = np.zeros((n_windows, 3), dtype=np.int64)
    exceedance = np.zeros((len(checkpoints), len(thresholds)), dtype=np.int64)
    window_classical = np.zeros(n_windows, dtype=np.int64)
    window_flips = np.zeros(n_windows, dtype=np.int64)
    gate_openings = gated_uses = 0

    if config.record_trajectories:
        paths = np.empty((k, n + 1), dtype=np.int64)
        paths[:, 0] = mem
        codes = np.empty((k, n), dtype=np.int8)
        routes = np.empty((k, n), dtype=np.int8)
        gates = np.empty((k, n), dtype=np.int8)

    for block_start in range(0, n, DRAW_BLOCK):
        size = min(DRAW_BLOCK, n - block_start)
        # shape (size, k, 3): one row per use for every trajectory in the batch
        draws = np.stack([draw_rows(rng, size) for rng in rngs], axis=1)
        for j in range(size):
            t = block_start + j
            residues = np.mod(mem, 3)
            residue_by_window[t // window] += np.bincount(residues, minlength=3)
            if t >= burn_in:
                residue_counts[rows, residues] += 1

            result = kernel.step(mem, draws[j])
            delivered = result.codes != ERASED_CODE
            delivered_by_position[t] = delivered.sum()
            window_counts[:, t // window] += delivered
            gate_openings += int((result.gates == GATE_OPEN).sum())
            gated_uses += int((result.gates != GATE_UNDEFINED).sum())
            if result.inputs is not None:
                window_classical[t // window] += int(delivered.sum())
                window_flips[t // window] += int((delivered & (result.codes != result.inputs)).sum())

            mem = result.memory
            np.maximum(running_max, mem, out=running_max)
            if (row := checkpoints.get(t + 1)) is not None:
                exceedance[row] = (mem[:, None] >= thresholds[None, :]).sum(axis=0)

            if config.record_trajectories:
                paths[:, t + 1] = mem
                codes[:, t] = result.codes
                routes[:, t] = result.routes
                gates[:, t] = result.gates

    delivered_totals = window_counts.sum(axis=1)
    tally = EnsembleTally(
        trials=k,
        final_sum=int(mem.sum()),
        final_sumsq=int((mem.astype(object) ** 2).sum()),
        delivered_sum=int(delivered_totals.sum()),
        delivered_sumsq=int((delivered_totals**2).sum()),
        delivered_by_position=delivered_by_position,
        window_sum=window_counts.sum(axis=0),
        window_sumsq=(window_counts**2).sum(axis=0),
        residue_sum=residue_counts.sum(axis=0),
        residue_sumsq=(residue_counts**2).sum(axis=0),
        residue_by_window=residue_by_window,
        exceedance_counts=exceedance,
        max_exceedance_count=int((running_max >= spec.m0).sum()),
        window_classical_delivered=window_classical,
        window_flips=window_flips,
        gate_openings=gate_openings,
        gated_uses=gated_uses,
        classical_delivered=int(window_classical.sum()),
        flips=int(window_flips.sum()),
    )

    records = []
    if config.record_trajectories:
        records = [TrajectoryRecord(paths[i], codes[i], routes[i], gates[i]) for i in range(k)]
    return tally, records


def _batches(trials: int) -> list[tuple[int, int]]:
    return [(start, min(start + BATCH_TRIALS, trials)) for start in range(0, trials, BATCH_TRIALS)]


def _dump_stats(stats: AggregateStats) -> dict:
    return stats.tally.to_dict()


def _load_stats(config: SimulationConfig, data: dict) -> AggregateStats:
    return AggregateStats.from_tally(config, EnsembleTally.from_dict(data))


@cache_ensemble(dump=_dump_stats, load=_load_stats)
def run_ensemble(config: SimulationConfig) -> AggregateStats:
    """Simulate `config.trials` independent trajectories and aggregate them.

    Pass `cache_dir=...` to reuse results of an identical configuration.
    """
    if config.effective_burn_in >= config.uses > 0:
        logging.warning(
            "Burn-in %d covers all %d uses; no residue occupancy will be reported.",
            config.effective_burn_in,
            config.uses,
        )

    batches = _batches(config.trials)
    logging.debug(
        "Running %s ensemble: %d trials x %d uses in %d batch(es) on %d worker(s)",
        config.spec.kind.value,
        config.trials,
        config.uses,
        len(batches),
        config.workers,
    )
    arguments = [(config, start, stop) for start, stop in batches]
    if config.workers > 1 and len(batches) > 1:
        with multiprocessing.Pool(min(config.workers, len(batches))) as pool:
            results = pool.starmap(_run_batch, arguments)
    else:
        results = [_run_batch(*args) for args in arguments]

    tally = results[0][0]
    for batch_tally, _ in results[1:]:
        tally = tally.merge(batch_tally)

    trajectories = None
    if config.record_trajectories:
        trajectories = tuple(record for _, records in results for record in records)
    return AggregateStats.from_tally(config, tally, trajectories)


def empirical_stationary(stats: AggregateStats) -> StationaryDistribution:
    """Residue occupancy after the burn-in, as a distribution over {0, 1, 2}."""
    if stats.residue_occupancy is None:
        raise InsufficientSamplesError(
            f"No residue samples after the burn-in of {stats.burn_in} (uses = {stats.uses})."
        )
    total = int(stats.tally.residue_sum.sum())
    return StationaryDistribution(*(int(c) / total for c in stats.tally.residue_sum))


def effective_erasure_profile(stats: AggregateStats, window: Sequence[int] | None = None) -> list[tuple[int, float, float]]:
    """Per-position delivery rate with its binomial standard error over `window` = (start, stop)."""
    start, stop = (0, stats.uses) if window is None else window
    if not 0 <= start < stop <= stats.uses:
        raise ParameterError(f"Window ({start}, {stop}) must lie within [0, {stats.uses}] and be nonempty.")
    rates = stats.delivery_by_position()
    return [(t, float(rates[t]), binomial_stderr(float(rates[t]), stats.trials)) for t in range(start, stop)]


def late_window(stats: AggregateStats) -> WindowRate:
    """The last full statistics window, falling back to the trailing partial one."""
    windows = stats.delivery_rate_by_window
    if not windows:
        raise InsufficientSamplesError("No uses simulated, so there is no late window.")
    full = [w for w in windows if w.stop - w.start == stats.window]
    return full[-1] if full else windows[-1]


def late_flip_rate(stats: AggregateStats) -> WindowRate | None:
    """Flip share of delivered classical symbols over the window `late_window` picks.

    None when the late window delivered no classical symbol.
    """
    window = late_window(stats)
    index = window.start // stats.window
    delivered = int(stats.tally.window_classical_delivered[index])
    if delivered == 0:
        return None
    rate = int(stats.tally.window_flips[index]) / delivered
    return WindowRate(window.start, window.stop, rate, binomial_stderr(rate, delivered))
