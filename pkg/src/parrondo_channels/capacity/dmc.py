import attrs
import json
import logging
import math
from typing import Any, Sequence

import numpy as np
from scipy.special import rel_entr, xlogy

from ..exceptions import ConvergenceError, ParameterError
from ..markov import StationaryDistribution
from ..utilities import check_probability


ROW_SUM_TOLERANCE = 1e-12
DEFAULT_OUTPUTS = ("0", "1", "e")
MAX_ITERATIONS = 100_000


def _as_rows(value) -> np.ndarray:
    return np.atleast_2d(np.asarray(value, dtype=float))


@attrs.frozen
class DmcMatrix:
    """Transition law of a discrete memoryless channel, one row per input symbol."""

    rows: np.ndarray = attrs.field(converter=_as_rows, eq=False)
    outputs: tuple[str, ...] = attrs.field(default=DEFAULT_OUTPUTS, converter=tuple)

    def __attrs_post_init__(self):
        if self.rows.shape[1] != len(self.outputs):
            raise ParameterError(
                f"Rows have {self.rows.shape[1]} entries for {len(self.outputs)} output symbols."
            )
        if (self.rows < 0).any():
            raise ParameterError("Transition probabilities must be nonnegative.")
        if np.abs(self.rows.sum(axis=1) - 1.0).max() > ROW_SUM_TOLERANCE:
            raise ParameterError(f"Each row must sum to 1, got sums {self.rows.sum(axis=1).tolist()}.")

    def to_dict(self) -> dict[str, Any]:
        return {"outputs": list(self.outputs), "rows": self.rows.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "DmcMatrix":
        if not isinstance(d, dict) or "rows" not in d:
            raise ParameterError("A channel matrix needs a 'rows' entry.")
        return cls(d["rows"], d.get("outputs", DEFAULT_OUTPUTS))


@attrs.frozen
class CapacityResult:
    capacity: float
    lower_bound: float
    upper_bound: float
    input_distribution: tuple[float, ...]
    iterations: int


def mutual_information(matrix: DmcMatrix, input_distribution: Sequence[float]) -> float:
    """I(X; Y) in bits for input law q."""
    q = np.asarray(input_distribution, dtype=float)
    joint = q[:, None] * matrix.rows
    output = q @ matrix.rows
    # H(Y) - H(Y|X)
    h_y = -xlogy(output, output).sum()
    h_y_given_x = -xlogy(joint, matrix.rows).sum()
    return float((h_y - h_y_given_x) / math.log(2))


def bsc_dmc(p: float) -> DmcMatrix:
    p = check_probability(p)
    return DmcMatrix([[1.0 - p, p], [p, 1.0 - p]], outputs=("0", "1"))


def erasure_dmc(p: float) -> DmcMatrix:
    p = check_probability(p)
    return DmcMatrix([[1.0 - p, 0.0, p], [0.0, 1.0 - p, p]])


def _flip_symmetric(correct: float, flipped: float, erased: float) -> DmcMatrix:
    return DmcMatrix([[correct, flipped, erased], [flipped, correct, erased]])


def mixture_classical_dmc(
    lam: float,
    pi: StationaryDistribution,
    p_b: float,
    p_c: float,
    p_a: float = 0.5,
) -> DmcMatrix:
    """Single-use law of the classical mixture with the residue drawn from `pi`.

    Route A flips with probability p_a, route B erases with the residue-averaged
    source probability; correlations between uses are ignored.
    """
    for name, value in (("lambda", lam), ("p_a", p_a), ("p_b", p_b), ("p_c", p_c)):
        check_probability(value, name)
    p_bar = pi.pi0 * p_b + (1.0 - pi.pi0) * p_c
    flipped = lam * p_a
    erased = (1.0 - lam) * p_bar
    return _flip_symmetric(1.0 - flipped - erased, flipped, erased)


def effective_classical_dmc(delivery_rate: float, flip_rate: float) -> DmcMatrix:
    """Channel that delivers with probability r and flips a delivered bit with probability f."""
    r = check_probability(delivery_rate, "delivery_rate")
    f = check_probability(flip_rate, "flip_rate")
    return _flip_symmetric(r * (1.0 - f), r * f, 1.0 - r)


def dmc_capacity_blahut_arimoto(
    matrix: DmcMatrix,
    tolerance: float = 1e-9,
    max_iter: int = MAX_ITERATIONS,
) -> CapacityResult:
    """Capacity by alternating maximization, starting from the uniform input.

    With D(x) = KL(W(.|x) || qW), every iterate satisfies
    sum_x q(x) D(x) <= C <= max_x D(x); iteration stops once the gap is
    within `tolerance` bits.
    """
    if tolerance <= 0:
        raise ParameterError(f"'tolerance' must be positive, got {tolerance}.")

    W = matrix.rows
    q = np.full(W.shape[0], 1.0 / W.shape[0])
    for iteration in range(1, max_iter + 1):
        output = q @ W
        divergence = rel_entr(W, output[None, :]).sum(axis=1) / math.log(2)
        lower = float(q @ divergence)
        upper = float(divergence.max())
        if upper - lower <= tolerance:
            logging.debug("Blahut-Arimoto converged after %d iterations (gap %.3g)", iteration, upper - lower)
            return CapacityResult(
                capacity=max(0.0, lower),
                lower_bound=max(0.0, lower),
                upper_bound=max(0.0, upper),
                input_distribution=tuple(float(v) for v in q),
                iterations=iteration,
            )
        q = q * np.exp2(divergence - upper)
        q /= q.sum()

    raise ConvergenceError(
        f"Blahut-Arimoto did not reach a gap of {tolerance} within {max_iter} iterations "
        f"(last bounds {lower:.6g} <= C <= {upper:.6g})."
    )
