import attrs
import math
from pathlib import Path
from typing import Any, Mapping

from .channel.spec import ChannelSpec, Track
from .conf import DEFAULTS, SCHEMA_VERSION, layered, locate_config
from .exceptions import ConfigurationError
from .montecarlo.config import SimulationConfig
from .structures import Configuration, check_keys


ROLES = ("A", "B", "C")
FORMATS = ("md", "csv", "json")
TOP_LEVEL_KEYS = ("version", *DEFAULTS)

# Command-line flags and the config section each one overrides.
FLAG_SECTIONS = {
    "m0": "parameters",
    "lambda": "parameters",
    "uses": "simulation",
    "trials": "simulation",
    "seed": "simulation",
    "workers": "simulation",
    "record_trajectories": "simulation",
    "out": "output",
    "format": "output",
}


def _check_choice(choices):
    def validator(instance, attribute, value):
        if value not in choices:
            raise ConfigurationError(
                f"'{attribute.name}' must be one of {', '.join(choices)}, got {value!r}."
            )

    return validator


@attrs.frozen
class ExperimentConfig:
    """Channel specs for the roles A, B and C plus the shared simulation settings."""

    roles: dict[str, ChannelSpec]
    track: Track = attrs.field(converter=Track)
    uses: int = 100_000
    trials: int = 10_000
    seed: int = 0
    burn_in: int | None = None
    window: int | None = None
    workers: int = 1
    record_trajectories: bool = False
    late_fraction: float = attrs.field(default=0.1)
    cache_dir: Path | None = attrs.field(default=None, converter=attrs.converters.optional(Path))
    out: Path = attrs.field(default=Path("output"), converter=Path)
    format: str = attrs.field(default="md", validator=_check_choice(FORMATS))

    @late_fraction.validator
    def _check_late_fraction(self, attribute, value):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0.0 < value <= 1.0:
            raise ConfigurationError(f"'late_fraction' must lie in (0, 1], got {value!r}.")

    @classmethod
    def load(cls, path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> "ExperimentConfig":
        """Read `path` (or the nearest .parrondo.json) and apply flag `overrides` on top."""
        if path is None:
            path = locate_config()
        return cls.from_dict(dict(Configuration.from_file(path)), overrides)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], overrides: Mapping[str, Any] | None = None) -> "ExperimentConfig":
        file_config = Configuration(data)
        file_config.reject_unknown(TOP_LEVEL_KEYS, "experiment config")
        if (version := file_config.get("version", SCHEMA_VERSION)) != SCHEMA_VERSION:
            raise ConfigurationError(
                f"Unsupported config version {version!r}; this release reads version {SCHEMA_VERSION}."
            )

        flags = {section: {} for section in DEFAULTS}
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key not in FLAG_SECTIONS:
                raise ConfigurationError(f"Unknown override '{key}'.")
            flags[FLAG_SECTIONS[key]][key] = value

        sections = {}
        for section in ("parameters", "simulation", "output"):
            from_file = file_config.get_in(section, default={})
            if not isinstance(from_file, dict):
                raise ConfigurationError(f"'{section}' must be a JSON object.")
            check_keys(from_file, DEFAULTS[section], section)
            sections[section] = layered(section, flags[section], from_file)

        try:
            track = Track(file_config.get("track", DEFAULTS["track"]))
        except ValueError:
            raise ConfigurationError(
                f"'track' must be one of {', '.join(t.value for t in Track)}, got {file_config['track']!r}."
            ) from None
        roles = _role_specs(file_config.get_in("roles", default={}), sections["parameters"], flags["parameters"], track)

        simulation, output = sections["simulation"], sections["output"]
        return cls(
            roles=roles,
            track=track,
            uses=simulation["uses"],
            trials=simulation["trials"],
            seed=simulation["seed"],
            burn_in=simulation["burn_in"],
            window=simulation["window"],
            workers=simulation["workers"],
            record_trajectories=simulation["record_trajectories"],
            late_fraction=simulation["late_fraction"],
            cache_dir=simulation["cache_dir"],
            out=output["out"],
            format=output["format"],
        )

    def spec(self, role: str, track: Track | None = None) -> ChannelSpec:
        spec = self.roles[role]
        if track is not None and spec.track is not track:
            spec = spec.evolve(kind=spec.kind.on_track(track))
        return spec

    def simulation(self, role: str, track: Track | None = None) -> SimulationConfig:
        return SimulationConfig(
            spec=self.spec(role, track),
            uses=self.uses,
            trials=self.trials,
            base_seed=self.seed,
            record_trajectories=self.record_trajectories,
            burn_in=self.burn_in,
            window=self.window if self.window is not None else max(1, math.ceil(self.uses * self.late_fraction)),
            workers=self.workers,
        )


def _role_specs(
    roles: Any,
    parameters: Mapping[str, Any],
    parameter_flags: Mapping[str, Any],
    track: Track,
) -> dict[str, ChannelSpec]:
    if not isinstance(roles, dict):
        raise ConfigurationError("'roles' must be a JSON object.")
    check_keys(roles, ROLES, "roles")

    specs = {}
    for role in ROLES:
        entry = roles.get(role, DEFAULTS["roles"][role])
        if not isinstance(entry, dict):
            raise ConfigurationError(f"Role '{role}' must be a JSON object.")
        # role entries refine the shared parameters; flags win over both
        merged = {**parameters, **entry, **parameter_flags}
        if "kind" not in entry:
            merged["kind"] = DEFAULTS["roles"][role]["kind"]
        spec = ChannelSpec.from_dict(merged)
        if spec.track is not track:
            spec = spec.evolve(kind=spec.kind.on_track(track))
        specs[role] = spec
    return specs
