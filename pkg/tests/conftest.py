import pytest

from parrondo_channels.channel import ChannelKind, ChannelSpec
from parrondo_channels.montecarlo import SimulationConfig, run_ensemble


# Desk-scale ensembles: a small threshold so the mixture's gate opens early.
USES = 40_000
TRIALS = 256
M0 = 10


def desk_config(kind: ChannelKind, **spec_changes) -> SimulationConfig:
    spec = ChannelSpec(kind=kind, m0=M0, **spec_changes)
    return SimulationConfig(spec=spec, uses=USES, trials=TRIALS, base_seed=2024)


@pytest.fixture(scope="session")
def desk_stats():
    return {
        role: run_ensemble(desk_config(kind))
        for role, kind in (("A", ChannelKind.A), ("B", ChannelKind.B), ("C", ChannelKind.C_LAMBDA))
    }
