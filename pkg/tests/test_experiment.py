import json
import math
from pathlib import Path

import pytest

from parrondo_channels.channel import ChannelKind, Track
from parrondo_channels.conf import CONFIG_NAME, DEFAULTS, layered, locate_config
from parrondo_channels.exceptions import ConfigurationError
from parrondo_channels.experiment import ExperimentConfig


def test_defaults():
    config = ExperimentConfig.from_dict({})
    assert config.track is Track.QUANTUM
    assert [config.roles[r].kind for r in "ABC"] == [ChannelKind.A, ChannelKind.B, ChannelKind.C_LAMBDA]
    assert config.roles["C"].lam == 0.5
    assert config.roles["B"].m0 == 100
    assert (config.uses, config.trials, config.seed) == (100_000, 10_000, 0)
    assert config.out == Path("output")
    assert config.format == "md"


def test_flags_beat_file_beat_defaults():
    data = {
        "version": 1,
        "parameters": {"m0": 20, "p_b": 0.8},
        "simulation": {"uses": 500, "trials": 8},
    }
    config = ExperimentConfig.from_dict(data, overrides={"m0": 5, "trials": None, "lambda": 0.25})
    assert all(config.roles[r].m0 == 5 for r in "ABC")
    assert config.roles["B"].p_b == 0.8
    assert config.roles["C"].lam == 0.25
    assert config.uses == 500
    assert config.trials == 8
    assert config.seed == DEFAULTS["simulation"]["seed"]


def test_role_entries_refine_shared_parameters():
    data = {"parameters": {"p_c": 0.3}, "roles": {"B": {"kind": "B", "p_c": 0.2}}}
    config = ExperimentConfig.from_dict(data)
    assert config.roles["B"].p_c == 0.2
    assert config.roles["C"].p_c == 0.3
    assert config.roles["A"].kind is ChannelKind.A


def test_classical_track_converts_roles():
    config = ExperimentConfig.from_dict({"track": "classical"})
    assert [config.roles[r].kind for r in "ABC"] == [
        ChannelKind.CLASSICAL_A,
        ChannelKind.CLASSICAL_B,
        ChannelKind.CLASSICAL_C,
    ]
    assert config.spec("C", Track.QUANTUM).kind is ChannelKind.C_LAMBDA


@pytest.mark.parametrize(
    "data",
    [
        {"version": 2},
        {"colour": "red"},
        {"track": "analog"},
        {"simulation": {"speed": 3}},
        {"simulation": []},
        {"roles": {"D": {"kind": "A"}}},
        {"roles": {"A": "A"}},
        {"roles": {"A": {"kind": "Z"}}},
        {"track": "classical", "roles": {"A": {"kind": "T"}}},
        {"parameters": {"p_a": 1.5}},
        {"output": {"format": "xml"}},
        {"simulation": {"late_fraction": 0}},
    ],
)
def test_rejected_configs(data):
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict(data)


def test_unknown_override():
    with pytest.raises(ConfigurationError, match="Unknown override"):
        ExperimentConfig.from_dict({}, overrides={"p_z": 0.1})


def test_simulation_window_follows_late_fraction():
    config = ExperimentConfig.from_dict({"simulation": {"uses": 1234, "trials": 3, "late_fraction": 0.25, "seed": 9}})
    simulation = config.simulation("B")
    assert simulation.window == math.ceil(1234 * 0.25)
    assert simulation.effective_window == simulation.window
    assert simulation.base_seed == 9
    assert simulation.spec is config.roles["B"]

    explicit = ExperimentConfig.from_dict({"simulation": {"uses": 1234, "window": 100}})
    assert explicit.simulation("A").window == 100

    classical = config.simulation("C", Track.CLASSICAL)
    assert classical.spec.kind is ChannelKind.CLASSICAL_C


def test_config_file_is_found_upwards(tmp_path, monkeypatch):
    (tmp_path / CONFIG_NAME).write_text(json.dumps({"version": 1, "simulation": {"uses": 77}}))
    nested = tmp_path / "a" / "b"
    nested.mkdir(parents=True)
    monkeypatch.chdir(nested)

    assert locate_config() == tmp_path / CONFIG_NAME
    assert ExperimentConfig.load().uses == 77
    assert ExperimentConfig.load(overrides={"uses": 5}).uses == 5


def test_missing_config_file(tmp_path):
    assert locate_config("no-such-config.json", start=tmp_path) is None
    with pytest.raises(ConfigurationError):
        ExperimentConfig.load(tmp_path / "absent.json")


def test_layered():
    chain = layered("simulation", {"uses": 3}, None, {"uses": 4, "trials": 5})
    assert chain["uses"] == 3
    assert chain["trials"] == 5
    assert chain["workers"] == DEFAULTS["simulation"]["workers"]


def test_late_fraction_is_configurable():
    assert ExperimentConfig.from_dict({}).late_fraction == 0.1
    assert ExperimentConfig.from_dict({"simulation": {"late_fraction": 0.5}}).late_fraction == 0.5


@pytest.mark.parametrize("fraction", [0, 1.5, True, "half"])
def test_late_fraction_is_validated(fraction):
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict({"simulation": {"late_fraction": fraction}})
