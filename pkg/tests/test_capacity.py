import numpy as np
import pytest

from parrondo_channels.capacity import (
    CapacityStatus,
    DmcMatrix,
    ErasureRegime,
    PortDistribution,
    antidegradability_check,
    apply_degrading,
    binary_entropy,
    bsc_capacity,
    bsc_dmc,
    coherent_information_effective_erasure,
    degrading_coefficient,
    dmc_capacity_blahut_arimoto,
    effective_classical_dmc,
    effective_erasure_capacity,
    erasure_dmc,
    erasure_private_capacity,
    erasure_quantum_capacity,
    erasure_regime,
    mixture_classical_dmc,
    mutual_information,
)
from parrondo_channels.exceptions import ConvergenceError, NotAntiDegradableError, ParameterError
from parrondo_channels.markov import mixture_chain, stationary_distribution


MIXTURE_PI = stationary_distribution(mixture_chain(0.5, 0.5, 0.91, 0.26))


def test_binary_entropy():
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.26) == pytest.approx(0.8267, abs=1e-4)
    with pytest.raises(ParameterError):
        binary_entropy(1.5)


def test_bsc_capacity():
    assert bsc_capacity(0.5) == pytest.approx(0.0, abs=1e-12)
    assert bsc_capacity(0.0) == 1.0
    assert bsc_capacity(0.11) == pytest.approx(0.50008, abs=1e-5)


def test_erasure_capacities():
    assert erasure_quantum_capacity(0.5) == 0.0
    assert erasure_quantum_capacity(0.9) == 0.0
    assert erasure_quantum_capacity(0.0) == 1.0
    assert erasure_quantum_capacity(0.49215) == pytest.approx(0.0157, abs=1e-4)
    assert erasure_private_capacity(0.49215) == erasure_quantum_capacity(0.49215)


def test_coherent_information_sign():
    assert coherent_information_effective_erasure(0.5, 1) == 0.0
    assert coherent_information_effective_erasure(0.9, 1) == pytest.approx(-0.8)
    assert coherent_information_effective_erasure(0.49215, 1) == pytest.approx(0.0157)
    with pytest.raises(ParameterError):
        coherent_information_effective_erasure(0.5, -1)


def test_erasure_regime():
    assert erasure_regime(0.26) is ErasureRegime.DEGRADABLE
    assert erasure_regime(0.5) is ErasureRegime.ANTI_DEGRADABLE
    assert erasure_regime(0.91) is ErasureRegime.ANTI_DEGRADABLE


@pytest.mark.parametrize("r, t", [(0.0, 0.0), (0.5, 1.0), (0.25, 1 / 3)])
def test_degrading_coefficient(r, t):
    assert degrading_coefficient(r) == pytest.approx(t)


def test_degrading_coefficient_exists_only_up_to_one_half():
    with pytest.raises(NotAntiDegradableError):
        degrading_coefficient(0.5 + 1e-12)
    with pytest.raises(NotAntiDegradableError):
        degrading_coefficient(0.5078)


def test_degrading_map_reproduces_bob_port():
    for r in np.linspace(0.0, 0.5, 501):
        degraded = apply_degrading(PortDistribution.eve(r), degrading_coefficient(r))
        bob = PortDistribution.bob(r)
        assert abs(degraded.delivered_weight - bob.delivered_weight) <= 1e-12
        assert abs(degraded.erased_weight - bob.erased_weight) <= 1e-12


def test_apply_degrading_examples():
    assert apply_degrading(PortDistribution(0.75, 0.25), 1 / 3).delivered_weight == pytest.approx(0.25)
    assert apply_degrading(PortDistribution(0.4, 0.6), 0.0) == PortDistribution(0.0, 1.0)
    with pytest.raises(ParameterError):
        PortDistribution(0.5, 0.6)


def test_antidegradability_check():
    verdict = antidegradability_check([0.0, 0.0, 0.0])
    assert verdict.block_antidegradable
    assert verdict.coefficients == [0.0, 0.0, 0.0]

    failing = antidegradability_check([0.2, 0.5078])
    assert not failing.block_antidegradable
    assert failing.coefficients == [pytest.approx(0.25), None]

    tolerant = antidegradability_check([0.501], stderrs=[0.001])
    assert tolerant.block_antidegradable
    assert tolerant.coefficients == [1.0]

    with pytest.raises(ParameterError):
        antidegradability_check([0.1, 0.2], stderrs=[0.01])


def test_antidegradability_check_logs_clamped_ports(caplog):
    with caplog.at_level("DEBUG"):
        verdict = antidegradability_check([0.3, 0.502], stderrs=[0.0, 0.001])
    assert verdict.coefficients == [pytest.approx(3 / 7), 1.0]
    assert "Port weight 0.502 exceeds 1/2" in caplog.text
    assert "0.3 exceeds" not in caplog.text


def test_mixture_classical_dmc():
    matrix = mixture_classical_dmc(0.5, MIXTURE_PI, 0.91, 0.26)
    assert matrix.rows[0].tolist() == pytest.approx([0.5079, 0.25, 0.2421], abs=1e-4)
    assert matrix.rows[1].tolist() == pytest.approx([0.25, 0.5079, 0.2421], abs=1e-4)

    pure_a = mixture_classical_dmc(1.0, MIXTURE_PI, 0.91, 0.26)
    assert pure_a.rows[0].tolist() == pytest.approx([0.5, 0.5, 0.0])

    erasure = mixture_classical_dmc(0.0, MIXTURE_PI, 0.3, 0.3)
    assert erasure.rows[0].tolist() == pytest.approx([0.7, 0.0, 0.3])


def test_dmc_matrix_validation_and_json():
    with pytest.raises(ParameterError):
        DmcMatrix([[0.5, 0.6, 0.0]])
    with pytest.raises(ParameterError):
        DmcMatrix([[1.0, 0.0]])
    matrix = erasure_dmc(0.25)
    restored = DmcMatrix.from_dict(matrix.to_dict())
    assert np.array_equal(restored.rows, matrix.rows)
    assert restored.outputs == ("0", "1", "e")


def test_blahut_arimoto_closed_forms():
    assert dmc_capacity_blahut_arimoto(bsc_dmc(0.1)).capacity == pytest.approx(0.5310, abs=1e-4)
    assert dmc_capacity_blahut_arimoto(bsc_dmc(0.5)).capacity == pytest.approx(0.0, abs=1e-9)
    assert dmc_capacity_blahut_arimoto(erasure_dmc(0.3)).capacity == pytest.approx(0.7, abs=1e-8)


def test_blahut_arimoto_on_the_mixture():
    matrix = mixture_classical_dmc(0.5, MIXTURE_PI, 0.91, 0.26)
    result = dmc_capacity_blahut_arimoto(matrix)
    assert result.capacity > 0
    assert result.capacity == pytest.approx(0.065, abs=2e-3)
    assert result.capacity == pytest.approx(mutual_information(matrix, [0.5, 0.5]), abs=1e-6)
    assert result.lower_bound <= result.upper_bound <= result.lower_bound + 1e-9


def test_blahut_arimoto_asymmetric_channel():
    z_channel = DmcMatrix([[1.0, 0.0], [0.5, 0.5]], outputs=("0", "1"))
    result = dmc_capacity_blahut_arimoto(z_channel, tolerance=1e-7)
    # Z channel with crossover 1/2: log2(5/4)
    assert result.capacity == pytest.approx(np.log2(1.25), abs=1e-6)
    assert result.lower_bound <= result.upper_bound
    assert result.input_distribution[0] > 0.5


def test_blahut_arimoto_limits():
    with pytest.raises(ParameterError):
        dmc_capacity_blahut_arimoto(bsc_dmc(0.1), tolerance=0)
    z_channel = DmcMatrix([[1.0, 0.0], [0.5, 0.5]], outputs=("0", "1"))
    with pytest.raises(ConvergenceError):
        dmc_capacity_blahut_arimoto(z_channel, tolerance=1e-12, max_iter=2)


def test_effective_erasure_capacity():
    positive = effective_erasure_capacity(0.5078, 0.0005, samples=100_000)
    assert positive.status is CapacityStatus.POSITIVE
    assert positive.point == pytest.approx(0.0156)
    assert 0 < positive.lower < positive.point
    assert positive.degrading_coefficient is None

    zero = effective_erasure_capacity(0.0, 0.0, samples=100_000)
    assert zero.status is CapacityStatus.ZERO
    assert zero.degrading_coefficient == 0.0

    few = effective_erasure_capacity(0.9, 0.01, samples=10)
    assert few.status is CapacityStatus.INCONCLUSIVE


def test_effective_classical_dmc():
    matrix = effective_classical_dmc(0.75, 1 / 3)
    assert matrix.rows[0].tolist() == pytest.approx([0.5, 0.25, 0.25])
    assert dmc_capacity_blahut_arimoto(effective_classical_dmc(1.0, 0.0)).capacity == pytest.approx(1.0)
    assert dmc_capacity_blahut_arimoto(effective_classical_dmc(0.0, 0.0)).capacity == pytest.approx(0.0)
