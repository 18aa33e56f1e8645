import attrs
import json
import math
from typing import Any

from ..channel.spec import ChannelSpec
from ..exceptions import ConfigurationError, SimulationError


MEMORY_LIMIT = 2**62
DEFAULT_CHECKPOINTS = (1_000, 10_000, 100_000)
DEFAULT_THRESHOLDS = (10, 100)


def _nonnegative(instance, attribute, value):
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigurationError(f"'{attribute.name}' must be a nonnegative integer, got {value!r}.")


def _positive(instance, attribute, value):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigurationError(f"'{attribute.name}' must be a positive integer, got {value!r}.")


def _optional_positive(instance, attribute, value):
    if value is not None:
        _positive(instance, attribute, value)


def _optional_nonnegative(instance, attribute, value):
    if value is not None:
        _nonnegative(instance, attribute, value)


def _int_tuple(value) -> tuple[int, ...] | None:
    return None if value is None else tuple(int(v) for v in value)


@attrs.frozen
class SimulationConfig:
    """Parameters of one ensemble: `trials` trajectories of `uses` channel uses each."""

    spec: ChannelSpec = attrs.field(validator=attrs.validators.instance_of(ChannelSpec))
    uses: int = attrs.field(validator=_nonnegative)
    trials: int = attrs.field(validator=_positive)
    base_seed: int = attrs.field(default=0, validator=_nonnegative)
    record_trajectories: bool = attrs.field(default=False)
    burn_in: int | None = attrs.field(default=None, validator=_optional_nonnegative)
    window: int | None = attrs.field(default=None, validator=_optional_positive)
    checkpoints: tuple[int, ...] | None = attrs.field(default=None, converter=_int_tuple)
    thresholds: tuple[int, ...] | None = attrs.field(default=None, converter=_int_tuple)
    # Execution detail only; never changes the results.
    workers: int = attrs.field(default=1, validator=_positive, eq=False)

    def __attrs_post_init__(self):
        if abs(self.spec.initial_memory) + self.uses >= MEMORY_LIMIT:
            raise SimulationError(
                f"Memory could reach {abs(self.spec.initial_memory) + self.uses}, "
                f"beyond the checked range of +/-2^62."
            )
        if self.base_seed >= 2**64:
            raise ConfigurationError(f"'base_seed' must fit in 64 bits, got {self.base_seed}.")

    @property
    def effective_burn_in(self) -> int:
        if self.burn_in is not None:
            return self.burn_in
        return max(1_000, 10 * self.spec.m0)

    @property
    def effective_window(self) -> int:
        if self.window is not None:
            return self.window
        return max(1, math.ceil(self.uses / 10))

    @property
    def effective_checkpoints(self) -> tuple[int, ...]:
        candidates = self.checkpoints if self.checkpoints is not None else (*DEFAULT_CHECKPOINTS, self.uses)
        return tuple(sorted({t for t in candidates if 1 <= t <= self.uses}))

    @property
    def effective_thresholds(self) -> tuple[int, ...]:
        candidates = self.thresholds if self.thresholds is not None else (*DEFAULT_THRESHOLDS, self.spec.m0)
        return tuple(sorted(set(candidates)))

    def to_dict(self) -> dict[str, Any]:
        """Canonical form of everything that determines the results (workers excluded)."""
        return {
            "spec": self.spec.to_dict(),
            "uses": self.uses,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "burn_in": self.effective_burn_in,
            "window": self.effective_window,
            "checkpoints": list(self.effective_checkpoints),
            "thresholds": list(self.effective_thresholds),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
