import math
from enum import Enum

from scipy.special import entr

from ..exceptions import ParameterError
from ..utilities import check_probability


class ErasureRegime(Enum):
    DEGRADABLE = "degradable"
    ANTI_DEGRADABLE = "anti-degradable"


def binary_entropy(p: float) -> float:
    """H(p) in bits, with 0 log 0 = 0."""
    p = check_probability(p)
    return float((entr(p) + entr(1.0 - p)) / math.log(2))


def bsc_capacity(p: float) -> float:
    return 1.0 - binary_entropy(p)


def erasure_quantum_capacity(p: float) -> float:
    """Quantum capacity max(0, 1 - 2p) of the erasure channel with erasure probability p."""
    p = check_probability(p)
    return max(0.0, 1.0 - 2.0 * p)


def erasure_private_capacity(p: float) -> float:
    return erasure_quantum_capacity(p)


def coherent_information_effective_erasure(s: float, input_entropy: float = 1.0) -> float:
    """Coherent information (1 - 2s) S of an erasure channel with erasure probability s."""
    s = check_probability(s, "s")
    if input_entropy < 0:
        raise ParameterError(f"'input_entropy' must be nonnegative, got {input_entropy}.")
    return (1.0 - 2.0 * s) * input_entropy


def erasure_regime(p: float) -> ErasureRegime:
    """Erasure channels below one half erasure are degradable, the rest anti-degradable."""
    p = check_probability(p)
    return ErasureRegime.DEGRADABLE if p < 0.5 else ErasureRegime.ANTI_DEGRADABLE
