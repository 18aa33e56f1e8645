import attrs
from enum import Enum

from .degrading import antidegradability_check
from .entropy import erasure_quantum_capacity


MIN_LATE_SAMPLES = 1000


class CapacityStatus(Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    INCONCLUSIVE = "inconclusive"


@attrs.frozen
class CapacityEstimate:
    """Quantum capacity of an effective erasure channel estimated from its delivery rate."""

    delivery_rate: float
    stderr: float
    samples: int
    point: float
    lower: float
    status: CapacityStatus
    degrading_coefficient: float | None


def effective_erasure_capacity(
    delivery_rate: float,
    stderr: float,
    samples: int,
    sigmas: float = 3.0,
    min_samples: int = MIN_LATE_SAMPLES,
) -> CapacityEstimate:
    """Point value and `sigmas` lower confidence value of max(0, 2r - 1).

    Zero means the port is anti-degradable within `sigmas` standard errors.
    """
    point = erasure_quantum_capacity(1.0 - delivery_rate)
    lower = erasure_quantum_capacity(min(1.0, 1.0 - delivery_rate + sigmas * stderr))
    port = antidegradability_check([delivery_rate], [stderr], sigmas).ports[0]

    if samples < min_samples:
        status = CapacityStatus.INCONCLUSIVE
    elif lower > 0.0:
        status = CapacityStatus.POSITIVE
    else:
        status = CapacityStatus.ZERO

    return CapacityEstimate(
        delivery_rate=delivery_rate,
        stderr=stderr,
        samples=samples,
        point=point,
        lower=lower,
        status=status,
        degrading_coefficient=port.coefficient,
    )
