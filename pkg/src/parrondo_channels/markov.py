"""Closed-form analysis of the memory register.

The memory of every channel in the family moves by +1 on a successful use and
-1 on an erasure, and the success probability depends only on the memory
residue mod 3. The residue therefore follows a three-state Markov chain:

    state 0 --(s0)--> 1,  state 0 --(1-s0)--> 2
    state 1 --(s)---> 2,  state 1 --(1-s)---> 0
    state 2 --(s)---> 0,  state 2 --(1-s)---> 1

and the memory itself is a random walk whose drift is fixed by the chain's
stationary distribution.
"""

import attrs
import logging
import math
from typing import Iterable, Sequence

import numpy as np

from .channel.spec import ChannelKind, ChannelSpec
from .exceptions import ParameterError


STATIONARY_SUM_TOLERANCE = 1e-12


def _probability(instance, attribute, value):
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"'{attribute.name}' must be a probability in [0, 1], got {value}.")


@attrs.frozen
class Mod3Chain:
    success_prob_state0: float = attrs.field(converter=float, validator=_probability)
    success_prob_state12: float = attrs.field(converter=float, validator=_probability)

    @property
    def success_vector(self) -> np.ndarray:
        s0, s = self.success_prob_state0, self.success_prob_state12
        return np.array([s0, s, s])

    @property
    def matrix(self) -> np.ndarray:
        s0, s = self.success_prob_state0, self.success_prob_state12
        return np.array(
            [
                [0.0, s0, 1.0 - s0],
                [1.0 - s, 0.0, s],
                [s, 1.0 - s, 0.0],
            ]
        )

    @property
    def is_mixing(self) -> bool:
        """False when both success probabilities sit on {0, 1} and the chain is periodic."""
        return not (
            self.success_prob_state0 in (0.0, 1.0) and self.success_prob_state12 in (0.0, 1.0)
        )


@attrs.frozen
class StationaryDistribution:
    pi0: float
    pi1: float
    pi2: float
    mixing: bool = True

    def __attrs_post_init__(self):
        if min(self.pi0, self.pi1, self.pi2) < 0.0:
            raise ParameterError(f"Stationary probabilities must be nonnegative: {self.as_tuple()}")
        if abs(self.pi0 + self.pi1 + self.pi2 - 1.0) > STATIONARY_SUM_TOLERANCE:
            raise ParameterError(f"Stationary probabilities must sum to 1: {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.pi0, self.pi1, self.pi2)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())


@attrs.frozen
class WalkParams:
    p_success: float
    drift_per_step: float
    alpha: float


@attrs.frozen
class SweepRow:
    lam: float
    r_b: float
    r_c: float
    pi0: float
    p_success: float
    drift: float


def stationary_distribution(chain: Mod3Chain) -> StationaryDistribution:
    """Solve pi P = pi with the normalization row replacing the last balance equation.

    The chain has a single recurrent class for every parameter choice, so the
    system is always nonsingular. Periodic chains are flagged as non-mixing:
    their stationary law is the cycle average, which power iteration never reaches.
    """
    system = chain.matrix.T - np.eye(3)
    system[-1, :] = 1.0
    rhs = np.array([0.0, 0.0, 1.0])
    pi = np.linalg.solve(system, rhs)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()

    if not chain.is_mixing:
        logging.warning(
            "Chain with s0=%s, s=%s is periodic; returning the cycle-average distribution.",
            chain.success_prob_state0,
            chain.success_prob_state12,
        )
    return StationaryDistribution(*map(float, pi), mixing=chain.is_mixing)


def success_probability(pi: StationaryDistribution, chain: Mod3Chain) -> float:
    """Probability that one use succeeds (memory +1) when the residue is distributed as `pi`."""
    return chain.success_prob_state0 * pi.pi0 + chain.success_prob_state12 * (1.0 - pi.pi0)


def mixture_success_probs(lam: float, p_a: float, p_b: float, p_c: float) -> tuple[float, float]:
    """Success probabilities (r_b, r_c) of the shared-memory mixture in residue 0 and residues 1, 2."""
    for name, value in (("lambda", lam), ("p_a", p_a), ("p_b", p_b), ("p_c", p_c)):
        if not 0.0 <= value <= 1.0:
            raise ParameterError(f"'{name}' must be a probability in [0, 1], got {value}.")
    r_b = lam * (1.0 - p_a) + (1.0 - lam) * (1.0 - p_b)
    r_c = lam * (1.0 - p_a) + (1.0 - lam) * (1.0 - p_c)
    return r_b, r_c


def mixture_chain(lam: float, p_a: float, p_b: float, p_c: float) -> Mod3Chain:
    return Mod3Chain(*mixture_success_probs(lam, p_a, p_b, p_c))


def chain_for_spec(spec: ChannelSpec) -> Mod3Chain | None:
    """The residue chain driving the memory of `spec`; None for T, which never moves memory."""
    match spec.kind:
        case ChannelKind.A | ChannelKind.CLASSICAL_A:
            return Mod3Chain(1.0 - spec.p_a, 1.0 - spec.p_a)
        case ChannelKind.P | ChannelKind.B | ChannelKind.CLASSICAL_B:
            return Mod3Chain(1.0 - spec.p_b, 1.0 - spec.p_c)
        case ChannelKind.C_LAMBDA | ChannelKind.CLASSICAL_C:
            return mixture_chain(spec.lam, spec.p_a, spec.p_b, spec.p_c)
        case ChannelKind.T:
            return None


def drift(p_success: float) -> WalkParams:
    if not 0.0 <= p_success <= 1.0:
        raise ParameterError(f"'p_success' must be a probability in [0, 1], got {p_success}.")
    per_step = 2.0 * p_success - 1.0
    return WalkParams(p_success=p_success, drift_per_step=per_step, alpha=abs(per_step) / 2.0)


def analytic_walk(chain: Mod3Chain) -> WalkParams:
    return drift(success_probability(stationary_distribution(chain), chain))


def hoeffding_exceedance_bound(n: int, m0: int, alpha: float, log: bool = False) -> float:
    """Upper bound exp(-(m0 + 2 alpha n)^2 / (2n)) on Pr(S_n >= m0) for a walk with drift -2 alpha."""
    _check_walk_args(n, alpha)
    gap = m0 + 2.0 * alpha * n
    exponent = -(gap * gap) / (2.0 * n) if gap > 0 else 0.0
    return exponent if log else _clamped_exp(exponent)


def block_delivery_bound(n: int, alpha: float, log: bool = False) -> float:
    """Upper bound exp(-2 alpha^2 n) on the probability that Bob receives anything at use n."""
    _check_walk_args(n, alpha)
    exponent = -2.0 * alpha * alpha * n
    return exponent if log else _clamped_exp(exponent)


def mixture_delivery_lower_bound(n: int, m0: int, alpha: float, p_success: float) -> float:
    """Lower bound p (1 - exp(-(2 alpha n - m0)^2 / (2n))) on delivery at use n for drift +2 alpha.

    Zero (a trivial bound) until the expected walk has passed the threshold.
    """
    _check_walk_args(n, alpha)
    gap = 2.0 * alpha * n - m0
    if gap <= 0:
        return 0.0
    return float(min(1.0, max(0.0, -p_success * math.expm1(-(gap * gap) / (2.0 * n)))))


def power_iteration(chain: Mod3Chain, initial: Sequence[float], steps: int) -> np.ndarray:
    """Residue distribution after `steps` applications of the chain."""
    distribution = _as_distribution(initial)
    if steps < 0:
        raise ParameterError(f"'steps' must be nonnegative, got {steps}.")
    return distribution @ np.linalg.matrix_power(chain.matrix, steps)


def tv_distance(d1: Sequence[float], d2: Sequence[float], norm: str = "l1") -> float:
    """Distance between two distributions: plain L1 (default) or total variation (L1 / 2)."""
    a, b = np.asarray(d1, dtype=float), np.asarray(d2, dtype=float)
    if a.shape != b.shape:
        raise ParameterError(f"Distributions differ in length: {a.shape} vs {b.shape}.")
    l1 = float(np.abs(a - b).sum())
    match norm:
        case "l1":
            return l1
        case "tv":
            return l1 / 2.0
        case _:
            raise ParameterError(f"Unknown norm '{norm}'. Valid options: l1, tv")


def mixing_profile(chain: Mod3Chain, initial: Sequence[float], steps: int) -> np.ndarray:
    """L1 distance to stationarity after t = 0..steps applications."""
    target = stationary_distribution(chain).as_array()
    distribution = _as_distribution(initial)
    profile = np.empty(steps + 1)
    for t in range(steps + 1):
        profile[t] = tv_distance(distribution, target)
        distribution = distribution @ chain.matrix
    return profile


def decay_slope(profile: Sequence[float], floor: float = 1e-14) -> float:
    """Slope of the least-squares line through log(profile); negative for exponential forgetting."""
    values = np.asarray(profile, dtype=float)
    t = np.nonzero(values > floor)[0]
    if len(t) < 2:
        raise ParameterError("Need at least two distances above the floor to fit a decay rate.")
    slope, _ = np.polyfit(t, np.log(values[t]), 1)
    return float(slope)


def forgetting_rate(chain: Mod3Chain) -> float:
    """Second-largest eigenvalue modulus: delta(n) decays like this value to the power n."""
    moduli = sorted(np.abs(np.linalg.eigvals(chain.matrix)), reverse=True)
    return float(moduli[1])


def walk_variance(chain: Mod3Chain) -> float:
    """Asymptotic per-step variance of the Markov-modulated memory walk.

    Var(S_n) / n tends to 1 - mu^2 + 2 sum_k Cov(X_0, X_k); the covariance sum is
    read off the solution h of the Poisson equation (I - P) h = m - mu.
    """
    P = chain.matrix
    pi = stationary_distribution(chain).as_array()
    means = 2.0 * chain.success_vector - 1.0
    mu = float(pi @ means)
    fundamental = np.linalg.inv(np.eye(3) - P + np.outer(np.ones(3), pi))
    h = fundamental @ (means - mu)
    # increment of the transition i -> j: +1 to (i+1) mod 3, -1 to (i-1) mod 3
    steps = np.array([[0, 1, -1], [-1, 0, 1], [1, -1, 0]])
    covariance = float(pi @ ((P * steps) @ h))
    return 1.0 - mu * mu + 2.0 * covariance


def lambda_sweep(
    lambdas: Iterable[float], p_a: float = 0.5, p_b: float = 0.91, p_c: float = 0.26
) -> list[SweepRow]:
    rows = []
    for lam in lambdas:
        chain = mixture_chain(lam, p_a, p_b, p_c)
        pi = stationary_distribution(chain)
        p = success_probability(pi, chain)
        rows.append(
            SweepRow(
                lam=float(lam),
                r_b=chain.success_prob_state0,
                r_c=chain.success_prob_state12,
                pi0=pi.pi0,
                p_success=p,
                drift=drift(p).drift_per_step,
            )
        )
    return rows


def positive_drift_interval(rows: Sequence[SweepRow]) -> tuple[float, float] | None:
    """Smallest and largest swept weight with strictly positive drift."""
    winning = [row.lam for row in rows if row.drift > 0]
    return (min(winning), max(winning)) if winning else None


def _check_walk_args(n: int, alpha: float) -> None:
    if n < 1:
        raise ParameterError(f"'n' must be at least 1, got {n}.")
    if alpha < 0:
        raise ParameterError(f"'alpha' must be nonnegative, got {alpha}.")


def _clamped_exp(exponent: float) -> float:
    return float(min(1.0, math.exp(exponent)))


def _as_distribution(values: Sequence[float]) -> np.ndarray:
    distribution = np.asarray(values, dtype=float)
    if distribution.shape != (3,):
        raise ParameterError(f"Residue distribution must have 3 entries, got {distribution.shape}.")
    if (distribution < 0).any() or abs(distribution.sum() - 1.0) > 1e-9:
        raise ParameterError(f"Not a probability distribution: {distribution.tolist()}")
    return distribution
