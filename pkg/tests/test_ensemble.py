import json

import numpy as np
import pytest

from conftest import M0, TRIALS, USES
from parrondo_channels.capacity import bsc_capacity, mixture_classical_dmc
from parrondo_channels.channel import ChannelKind, ChannelSpec
from parrondo_channels.exceptions import (
    ConfigurationError,
    InsufficientSamplesError,
    ParameterError,
    SimulationError,
)
from parrondo_channels.markov import (
    analytic_walk,
    chain_for_spec,
    block_delivery_bound,
    hoeffding_exceedance_bound,
    mixture_chain,
    mixture_delivery_lower_bound,
    stationary_distribution,
    tv_distance,
)
from parrondo_channels.montecarlo import (
    BATCH_TRIALS,
    EnsembleTally,
    SimulationConfig,
    effective_erasure_profile,
    empirical_stationary,
    late_flip_rate,
    late_window,
    run_ensemble,
    run_trajectory,
)
from parrondo_channels.utilities import derive_seed


@pytest.mark.parametrize("kind", list(ChannelKind))
def test_ensemble_trials_replay_scalar_trajectories(kind):
    spec = ChannelSpec(kind=kind, m0=3, lam=0.4)
    config = SimulationConfig(spec=spec, uses=1100, trials=3, base_seed=11, record_trajectories=True)
    stats = run_ensemble(config)
    assert len(stats.trajectories) == 3
    for i, record in enumerate(stats.trajectories):
        assert record.same_as(run_trajectory(spec, 1100, derive_seed(11, i)))


def test_results_do_not_depend_on_workers():
    spec = ChannelSpec(kind=ChannelKind.C_LAMBDA, m0=2)
    config = SimulationConfig(spec=spec, uses=40, trials=BATCH_TRIALS + 10, base_seed=5)
    serial = run_ensemble(config)
    parallel = run_ensemble(SimulationConfig(spec=spec, uses=40, trials=BATCH_TRIALS + 10, base_seed=5, workers=2))
    assert serial.tally.same_as(parallel.tally)
    assert json.dumps(serial.to_dict(), sort_keys=True) == json.dumps(parallel.to_dict(), sort_keys=True)


def test_tally_merge_is_order_free():
    spec = ChannelSpec(kind=ChannelKind.B, m0=0)
    first = run_ensemble(SimulationConfig(spec=spec, uses=50, trials=20, base_seed=1)).tally
    second = run_ensemble(SimulationConfig(spec=spec, uses=50, trials=30, base_seed=2)).tally
    assert first.merge(second).same_as(second.merge(first))
    assert first.merge(second).trials == 50
    assert EnsembleTally.from_dict(json.loads(json.dumps(first.to_dict()))).same_as(first)


def test_drifts_match_closed_form(desk_stats):
    for role in ("A", "B", "C"):
        stats = desk_stats[role]
        expected = analytic_walk(chain_for_spec(stats.spec)).drift_per_step
        assert abs(stats.empirical_drift_per_step - expected) <= 3 * stats.drift_stderr, role


def test_drift_signs(desk_stats):
    assert desk_stats["B"].empirical_drift_per_step + 3 * desk_stats["B"].drift_stderr < 0
    assert desk_stats["C"].empirical_drift_per_step - 3 * desk_stats["C"].drift_stderr > 0


def test_empirical_stationary_matches_solver(desk_stats):
    for role in ("B", "C"):
        stats = desk_stats[role]
        empirical = empirical_stationary(stats)
        analytic = stationary_distribution(chain_for_spec(stats.spec))
        assert sum(empirical.as_tuple()) == pytest.approx(1.0)
        for value, expected, stderr in zip(empirical.as_tuple(), analytic.as_tuple(), stats.residue_stderr):
            assert abs(value - expected) <= 3 * stderr


def test_uniform_occupancy_when_sources_agree():
    stats = run_ensemble(SimulationConfig(spec=ChannelSpec(kind=ChannelKind.P, p_b=0.4, p_c=0.4), uses=3000, trials=200))
    for value, stderr in zip(empirical_stationary(stats).as_tuple(), stats.residue_stderr):
        assert abs(value - 1 / 3) <= 3 * stderr


def test_exceedance_respects_hoeffding(desk_stats):
    stats = desk_stats["B"]
    alpha = analytic_walk(chain_for_spec(stats.spec)).alpha
    assert {point.step for point in stats.exceedance} == {1000, 10_000, USES}
    assert {point.threshold for point in stats.exceedance} == {M0, 100}
    for point in stats.exceedance:
        bound = hoeffding_exceedance_bound(point.step, point.threshold, alpha)
        assert point.rate <= bound + 3 * point.stderr


def test_block_delivery_of_b_vanishes(desk_stats):
    stats = desk_stats["B"]
    profile = effective_erasure_profile(stats, (USES // 2, USES))
    assert all(rate < 0.5 for _, rate, _ in profile)
    assert late_window(stats).rate < 0.01


def test_mixture_late_window_delivers(desk_stats):
    stats = desk_stats["C"]
    window = late_window(stats)
    assert window.stop == USES
    assert abs(window.rate - 0.50785) <= 3 * window.stderr + 2e-3
    assert stats.gate_open_rate > 0.85


def test_burn_in_convergence():
    spec = ChannelSpec(kind=ChannelKind.B, m0=0)
    stats = run_ensemble(SimulationConfig(spec=spec, uses=200, trials=2000, window=1, burn_in=0))
    target = stationary_distribution(chain_for_spec(spec)).as_array()
    distances = [tv_distance(window, target) for window in stats.occupancy_by_window]
    assert distances[0] > 0.5
    assert max(distances[-10:]) < 0.1


def test_identity_channel_profile():
    spec = ChannelSpec(kind=ChannelKind.B, p_b=0.0, p_c=0.0, m0=-1000)
    stats = run_ensemble(SimulationConfig(spec=spec, uses=100, trials=10))
    assert all(rate == 1.0 for _, rate, _ in effective_erasure_profile(stats, (0, 100)))
    with pytest.raises(ParameterError):
        effective_erasure_profile(stats, (5, 5))
    with pytest.raises(ParameterError):
        effective_erasure_profile(stats, (90, 101))


def test_classical_flip_rate():
    spec = ChannelSpec(kind=ChannelKind.CLASSICAL_A, p_a=0.3)
    stats = run_ensemble(SimulationConfig(spec=spec, uses=500, trials=40))
    assert abs(stats.flip_rate - 0.3) <= 3 * stats.flip_stderr
    assert stats.gate_open_rate is None


def test_zero_uses_and_short_runs():
    empty = run_ensemble(SimulationConfig(spec=ChannelSpec(kind=ChannelKind.A), uses=0, trials=4))
    assert empty.empirical_drift_per_step is None
    assert empty.delivery_rate_by_window == ()
    assert empty.mean_final_memory == 0
    with pytest.raises(InsufficientSamplesError):
        empirical_stationary(empty)
    with pytest.raises(InsufficientSamplesError):
        late_window(empty)

    short = run_ensemble(SimulationConfig(spec=ChannelSpec(kind=ChannelKind.B), uses=50, trials=4))
    assert short.burn_in == 50
    with pytest.raises(InsufficientSamplesError):
        empirical_stationary(short)


def test_config_validation():
    spec = ChannelSpec(kind=ChannelKind.A)
    with pytest.raises(ConfigurationError):
        SimulationConfig(spec=spec, uses=10, trials=0)
    with pytest.raises(ConfigurationError):
        SimulationConfig(spec=spec, uses=-1, trials=1)
    with pytest.raises(SimulationError):
        SimulationConfig(spec=spec.evolve(initial_memory=2**62), uses=1, trials=1)

    config = SimulationConfig(spec=ChannelSpec(kind=ChannelKind.B, m0=500), uses=1234, trials=1)
    assert config.effective_burn_in == 5000
    assert config.effective_window == 124
    assert config.effective_checkpoints == (1000, 1234)
    assert config.effective_thresholds == (10, 100, 500)


def test_cache_round_trip(tmp_path, caplog):
    config = SimulationConfig(spec=ChannelSpec(kind=ChannelKind.C_LAMBDA, m0=2), uses=300, trials=8, base_seed=3)
    fresh = run_ensemble(config, cache_dir=tmp_path)
    cached_files = list(tmp_path.glob("run_ensemble_*.json"))
    assert len(cached_files) == 1

    reused = run_ensemble(config, cache_dir=tmp_path)
    assert reused.tally.same_as(fresh.tally)
    assert reused.to_dict() == fresh.to_dict()

    cached_files[0].write_text("not json")
    with caplog.at_level("WARNING"):
        recomputed = run_ensemble(config, cache_dir=tmp_path)
    assert "unreadable cache entry" in caplog.text
    assert recomputed.tally.same_as(fresh.tally)
    assert json.loads(cached_files[0].read_text())["config"] == json.loads(config.to_json())


def test_recorded_runs_skip_the_cache(tmp_path):
    config = SimulationConfig(spec=ChannelSpec(kind=ChannelKind.A), uses=5, trials=2, record_trajectories=True)
    run_ensemble(config, cache_dir=tmp_path)
    assert not list(tmp_path.iterdir())


def test_stats_are_well_formed(desk_stats):
    stats = desk_stats["C"]
    assert stats.trials == TRIALS
    assert sum(stats.residue_occupancy) == pytest.approx(1.0)
    assert all(0.0 <= w.rate <= 1.0 and w.stderr >= 0 for w in stats.delivery_rate_by_window)
    assert np.all(stats.delivery_by_position() <= 1.0)
    assert json.loads(json.dumps(stats.to_dict()))["spec"]["kind"] == "C_lambda"


def test_gate_open_rate_counts_only_gated_uses(desk_stats):
    gated_b = desk_stats["B"].tally
    assert gated_b.gated_uses == USES * TRIALS
    assert desk_stats["B"].gate_open_rate == gated_b.gate_openings / gated_b.gated_uses

    # route A uses of the mixture carry no gate
    mixture = desk_stats["C"]
    assert abs(mixture.tally.gated_uses / (USES * TRIALS) - 0.5) < 3e-3
    assert mixture.tally.gate_openings <= mixture.tally.gated_uses
    assert mixture.gate_open_rate == mixture.tally.gate_openings / mixture.tally.gated_uses

    assert desk_stats["A"].tally.gated_uses == 0
    assert desk_stats["A"].gate_open_rate is None


def test_late_flip_rate_of_classical_mixture():
    spec = ChannelSpec(kind=ChannelKind.CLASSICAL_C, m0=M0)
    stats = run_ensemble(SimulationConfig(spec=spec, uses=20_000, trials=128, base_seed=2024))
    pi = stationary_distribution(mixture_chain(0.5, 0.5, 0.91, 0.26))
    correct, flipped, _ = mixture_classical_dmc(0.5, pi, 0.91, 0.26).rows[0]
    expected = flipped / (correct + flipped)
    assert expected == pytest.approx(0.3299, abs=1e-4)

    late = late_flip_rate(stats)
    assert (late.start, late.stop) == (late_window(stats).start, late_window(stats).stop)
    assert abs(late.rate - expected) <= 3 * late.stderr + 5e-3
    # early windows are dominated by route A, so the whole-run rate overstates the late one
    assert stats.flip_rate_by_window[0] > late.rate + 0.02
    assert stats.flip_rate > late.rate
    assert int(stats.tally.window_flips.sum()) == stats.tally.flips
    assert int(stats.tally.window_classical_delivered.sum()) == stats.tally.classical_delivered


def test_late_flip_rate_needs_classical_symbols(desk_stats):
    assert late_flip_rate(desk_stats["A"]) is None
    assert all(rate is None for rate in desk_stats["A"].flip_rate_by_window)


def test_fair_flip_channel_has_no_capacity():
    spec = ChannelSpec(kind=ChannelKind.CLASSICAL_A, p_a=0.5)
    stats = run_ensemble(SimulationConfig(spec=spec, uses=1000, trials=64, base_seed=7))
    assert abs(stats.flip_rate - 0.5) <= 3 * stats.flip_stderr
    assert bsc_capacity(0.5) == pytest.approx(0.0, abs=1e-12)


def test_mixture_late_window_respects_lower_bound(desk_stats):
    stats = desk_stats["C"]
    walk = analytic_walk(chain_for_spec(stats.spec))
    window = late_window(stats)
    bound = mixture_delivery_lower_bound(window.start, M0, walk.alpha, walk.p_success)
    assert 0.0 < bound <= window.rate + 3 * window.stderr


def test_b_windows_respect_block_bound(desk_stats):
    stats = desk_stats["B"]
    alpha = analytic_walk(chain_for_spec(stats.spec)).alpha
    for window in stats.delivery_rate_by_window:
        if window.start > 0:
            assert window.rate <= block_delivery_bound(window.start, alpha) + 3 * window.stderr


def test_tally_round_trip_keeps_flip_windows():
    spec = ChannelSpec(kind=ChannelKind.CLASSICAL_C, m0=2)
    tally = run_ensemble(SimulationConfig(spec=spec, uses=200, trials=6, base_seed=4)).tally
    restored = EnsembleTally.from_dict(json.loads(json.dumps(tally.to_dict())))
    assert restored.same_as(tally)
    assert restored.window_flips.tolist() == tally.window_flips.tolist()
    assert restored.gated_uses == tally.gated_uses
