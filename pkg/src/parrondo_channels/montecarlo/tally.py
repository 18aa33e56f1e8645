"""Integer sufficient statistics of an ensemble.

Every field is a sum over trajectories, so tallies of disjoint trial ranges
merge by addition and the merged result does not depend on how the trials
were split into batches.
"""

import attrs
from typing import Any

import numpy as np

from ..exceptions import ParameterError


ARRAY_FIELDS = (
    "delivered_by_position",
    "window_sum",
    "window_sumsq",
    "residue_sum",
    "residue_sumsq",
    "residue_by_window",
    "exceedance_counts",
    "window_classical_delivered",
    "window_flips",
)
SCALAR_FIELDS = (
    "trials",
    "final_sum",
    "final_sumsq",
    "delivered_sum",
    "delivered_sumsq",
    "max_exceedance_count",
    "gate_openings",
    "gated_uses",
    "classical_delivered",
    "flips",
)


def _int_array(value) -> np.ndarray:
    return np.asarray(value, dtype=np.int64)


@attrs.define(eq=False)
class EnsembleTally:
    trials: int
    final_sum: int
    final_sumsq: int
    delivered_sum: int
    delivered_sumsq: int
    # delivered count at each use position, summed over trajectories
    delivered_by_position: np.ndarray = attrs.field(converter=_int_array)
    window_sum: np.ndarray = attrs.field(converter=_int_array)
    window_sumsq: np.ndarray = attrs.field(converter=_int_array)
    # occupancy counts of the residue before each use past the burn-in
    residue_sum: np.ndarray = attrs.field(converter=_int_array)
    residue_sumsq: np.ndarray = attrs.field(converter=_int_array)
    residue_by_window: np.ndarray = attrs.field(converter=_int_array)
    # trajectories at or above each threshold (columns) at each checkpoint (rows)
    exceedance_counts: np.ndarray = attrs.field(converter=_int_array)
    # classical-track deliveries and bit flips among them, per statistics window
    window_classical_delivered: np.ndarray = attrs.field(converter=_int_array)
    window_flips: np.ndarray = attrs.field(converter=_int_array)
    max_exceedance_count: int = 0
    gate_openings: int = 0
    # uses whose output passed through a T gate
    gated_uses: int = 0
    classical_delivered: int = 0
    flips: int = 0

    def merge(self, other: "EnsembleTally") -> "EnsembleTally":
        values = {name: getattr(self, name) + getattr(other, name) for name in SCALAR_FIELDS}
        for name in ARRAY_FIELDS:
            mine, theirs = getattr(self, name), getattr(other, name)
            if mine.shape != theirs.shape:
                raise ParameterError(f"Cannot merge tallies with different '{name}' shapes.")
            values[name] = mine + theirs
        return EnsembleTally(**values)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {name: int(getattr(self, name)) for name in SCALAR_FIELDS}
        for name in ARRAY_FIELDS:
            array = getattr(self, name)
            d[name] = {"shape": list(array.shape), "values": array.ravel().tolist()}
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "EnsembleTally":
        values: dict[str, Any] = {name: int(d[name]) for name in SCALAR_FIELDS}
        for name in ARRAY_FIELDS:
            values[name] = np.asarray(d[name]["values"], dtype=np.int64).reshape(d[name]["shape"])
        return cls(**values)

    def same_as(self, other: "EnsembleTally") -> bool:
        return all(getattr(self, n) == getattr(other, n) for n in SCALAR_FIELDS) and all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in ARRAY_FIELDS
        )
