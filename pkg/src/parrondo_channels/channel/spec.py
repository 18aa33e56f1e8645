import attrs
import json
from enum import Enum
from pathlib import Path
from typing import Any

from ..exceptions import ConfigurationError
from ..structures import Configuration, check_keys


class Track(Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"


class ChannelKind(Enum):
    A = "A"
    P = "P"
    T = "T"
    B = "B"
    C_LAMBDA = "C_lambda"
    CLASSICAL_A = "ClassicalA"
    CLASSICAL_B = "ClassicalB"
    CLASSICAL_C = "ClassicalC"

    @classmethod
    def parse(cls, value: "str | ChannelKind") -> "ChannelKind":
        if isinstance(value, ChannelKind):
            return value
        try:
            return cls(value)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ConfigurationError(
                f"Invalid channel kind '{value}'. Valid options: {valid}"
            ) from None

    @property
    def track(self) -> Track:
        return Track.CLASSICAL if self.value.startswith("Classical") else Track.QUANTUM

    @property
    def is_mixture(self) -> bool:
        return self in (ChannelKind.C_LAMBDA, ChannelKind.CLASSICAL_C)

    @property
    def has_gate(self) -> bool:
        return self not in (ChannelKind.A, ChannelKind.P, ChannelKind.CLASSICAL_A)

    def on_track(self, track: Track) -> "ChannelKind":
        """The counterpart of this kind on `track` (A <-> ClassicalA, ...)."""
        if self.track is track:
            return self
        pairs = {
            ChannelKind.A: ChannelKind.CLASSICAL_A,
            ChannelKind.B: ChannelKind.CLASSICAL_B,
            ChannelKind.C_LAMBDA: ChannelKind.CLASSICAL_C,
        }
        pairs.update({v: k for k, v in pairs.items()})
        if self not in pairs:
            raise ConfigurationError(f"Channel kind '{self.value}' has no {track.value} counterpart.")
        return pairs[self]


JSON_KEYS = ("kind", "p_a", "p_b", "p_c", "m0", "lambda", "initial_memory", "track")


def _probability(instance, attribute, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
        raise ConfigurationError(
            f"'{attribute.name}' must be a probability in [0, 1], got {value!r}."
        )


def _integer(instance, attribute, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigurationError(f"'{attribute.name}' must be an integer, got {value!r}.")


@attrs.frozen
class ChannelSpec:
    """Declarative description of one channel instance.

    Defaults are the construction's parameters: p_a = 0.5, p_b = 0.9 + 0.01,
    p_c = 0.25 + 0.01, mixing weight 1/2, memory starting at 0.
    """

    kind: ChannelKind = attrs.field(converter=ChannelKind.parse)
    p_a: float = attrs.field(default=0.5, validator=_probability)
    p_b: float = attrs.field(default=0.91, validator=_probability)
    p_c: float = attrs.field(default=0.26, validator=_probability)
    m0: int = attrs.field(default=100, validator=_integer)
    lam: float = attrs.field(default=0.5, validator=_probability)
    initial_memory: int = attrs.field(default=0, validator=_integer)

    @property
    def track(self) -> Track:
        return self.kind.track

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ChannelSpec":
        if not isinstance(data, dict):
            raise ConfigurationError("Channel spec must be a JSON object.")
        check_keys(data, JSON_KEYS, "channel spec")
        if "kind" not in data:
            raise ConfigurationError("Channel spec is missing 'kind'.")
        data = dict(data)
        track = data.pop("track", None)
        kind = ChannelKind.parse(data.pop("kind"))
        if track is not None and track != kind.track.value:
            raise ConfigurationError(
                f"Channel kind '{kind.value}' belongs to the {kind.track.value} track, not '{track}'."
            )
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        return cls(kind=kind, **data)

    @classmethod
    def from_file(cls, path: str | Path) -> "ChannelSpec":
        return cls.from_dict(dict(Configuration.from_file(path)))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "p_a": self.p_a,
            "p_b": self.p_b,
            "p_c": self.p_c,
            "m0": self.m0,
            "lambda": self.lam,
            "initial_memory": self.initial_memory,
            "track": self.track.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def evolve(self, **changes) -> "ChannelSpec":
        return attrs.evolve(self, **changes)
