"""Degrading maps between the two output ports of an effective erasure channel.

At every use Bob receives the input with probability r and an erasure flag
otherwise, while Eve holds the complementary port with weights (1 - r, r).
When r <= 1/2 Eve can reproduce Bob's port by keeping her symbol with
probability t = r / (1 - r) and erasing it otherwise.
"""

import attrs
import logging
from typing import Sequence

from ..exceptions import NotAntiDegradableError, ParameterError
from ..utilities import check_probability


PORT_SUM_TOLERANCE = 1e-12


@attrs.frozen
class PortDistribution:
    delivered_weight: float = attrs.field(converter=float)
    erased_weight: float = attrs.field(converter=float)

    def __attrs_post_init__(self):
        check_probability(self.delivered_weight, "delivered_weight")
        check_probability(self.erased_weight, "erased_weight")
        if abs(self.delivered_weight + self.erased_weight - 1.0) > PORT_SUM_TOLERANCE:
            raise ParameterError(
                f"Port weights must sum to 1, got {self.delivered_weight} + {self.erased_weight}."
            )

    @classmethod
    def bob(cls, r: float) -> "PortDistribution":
        return cls(r, 1.0 - r)

    @classmethod
    def eve(cls, r: float) -> "PortDistribution":
        return cls(1.0 - r, r)


@attrs.frozen
class PortVerdict:
    r: float
    passes: bool
    coefficient: float | None


@attrs.frozen
class AntiDegradabilityVerdict:
    ports: tuple[PortVerdict, ...]

    @property
    def block_antidegradable(self) -> bool:
        return all(port.passes for port in self.ports)

    @property
    def coefficients(self) -> list[float | None]:
        return [port.coefficient for port in self.ports]


def degrading_coefficient(r: float) -> float:
    r = check_probability(r, "r")
    if r > 0.5:
        raise NotAntiDegradableError(
            f"Bob's delivery weight {r} exceeds 1/2; Eve cannot degrade her port to his."
        )
    return r / (1.0 - r)


def apply_degrading(eve_port: PortDistribution, t: float) -> PortDistribution:
    """Keep Eve's symbol with probability t, erase it otherwise."""
    t = check_probability(t, "t")
    delivered = t * eve_port.delivered_weight
    return PortDistribution(delivered, 1.0 - delivered)


def antidegradability_check(
    profile: Sequence[float],
    stderrs: Sequence[float] | None = None,
    sigmas: float = 3.0,
) -> AntiDegradabilityVerdict:
    """Port-wise degrading test over a delivery profile r_1..r_k.

    With standard errors a port passes when r_i - sigmas * stderr_i <= 1/2,
    and its coefficient is computed from min(r_i, 1/2).
    """
    if stderrs is None:
        stderrs = [0.0] * len(profile)
    if len(stderrs) != len(profile):
        raise ParameterError(f"Got {len(stderrs)} standard errors for {len(profile)} ports.")

    ports = []
    for r, stderr in zip(profile, stderrs):
        r = check_probability(r, "r")
        passes = r - sigmas * stderr <= 0.5
        if passes and r > 0.5:
            logging.debug("Port weight %s exceeds 1/2 within %s sigma; using the coefficient of 1/2", r, sigmas)
        coefficient = degrading_coefficient(min(r, 0.5)) if passes else None
        ports.append(PortVerdict(r=r, passes=passes, coefficient=coefficient))
    return AntiDegradabilityVerdict(tuple(ports))
