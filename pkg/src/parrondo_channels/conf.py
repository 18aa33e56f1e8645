import logging
from collections import ChainMap
from pathlib import Path
from typing import Any, Mapping


CONFIG_NAME = ".parrondo.json"
SCHEMA_VERSION = 1

DEFAULTS = {
    "parameters": {
        "p_a": 0.5,
        "p_b": 0.91,
        "p_c": 0.26,
        "m0": 100,
        "lambda": 0.5,
        "initial_memory": 0,
    },
    "roles": {
        "A": {"kind": "A"},
        "B": {"kind": "B"},
        "C": {"kind": "C_lambda"},
    },
    "track": "quantum",
    "simulation": {
        "uses": 100_000,
        "trials": 10_000,
        "seed": 0,
        "burn_in": None,
        "window": None,
        "workers": 1,
        "record_trajectories": False,
        "late_fraction": 0.1,
        "cache_dir": None,
    },
    "output": {
        "out": "output",
        "format": "md",
    },
}


def locate_config(name: str = CONFIG_NAME, start: str | Path | None = None) -> Path | None:
    working_dir = Path(start) if start is not None else Path.cwd()
    for parent in [working_dir] + list(working_dir.parents):
        candidate = parent / name
        if candidate.exists():
            return candidate
    else:
        logging.debug(
            f"Configuration file '{name}' not found in {working_dir} or any parent directories."
        )
        return None


def layered(section: str, *layers: Mapping[str, Any] | None) -> ChainMap:
    """ChainMap over `layers` (highest precedence first), falling back to DEFAULTS[section]."""
    return ChainMap(*(dict(layer) for layer in layers if layer), DEFAULTS[section])
