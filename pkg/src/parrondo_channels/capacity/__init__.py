from .degrading import (
    AntiDegradabilityVerdict,
    PortDistribution,
    PortVerdict,
    antidegradability_check,
    apply_degrading,
    degrading_coefficient,
)
from .dmc import (
    CapacityResult,
    DmcMatrix,
    bsc_dmc,
    dmc_capacity_blahut_arimoto,
    effective_classical_dmc,
    erasure_dmc,
    mixture_classical_dmc,
    mutual_information,
)
from .effective import CapacityEstimate, CapacityStatus, effective_erasure_capacity
from .entropy import (
    ErasureRegime,
    binary_entropy,
    bsc_capacity,
    coherent_information_effective_erasure,
    erasure_private_capacity,
    erasure_quantum_capacity,
    erasure_regime,
)

__all__ = [
    "AntiDegradabilityVerdict",
    "CapacityEstimate",
    "CapacityResult",
    "CapacityStatus",
    "DmcMatrix",
    "ErasureRegime",
    "PortDistribution",
    "PortVerdict",
    "antidegradability_check",
    "apply_degrading",
    "binary_entropy",
    "bsc_capacity",
    "bsc_dmc",
    "coherent_information_effective_erasure",
    "degrading_coefficient",
    "dmc_capacity_blahut_arimoto",
    "effective_classical_dmc",
    "effective_erasure_capacity",
    "erasure_dmc",
    "erasure_private_capacity",
    "erasure_quantum_capacity",
    "erasure_regime",
    "mixture_classical_dmc",
    "mutual_information",
]
