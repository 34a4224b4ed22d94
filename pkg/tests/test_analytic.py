import math

import numpy as np
import pytest

from qkmismatch.common import QueryCounter
from qkmismatch.matching.decider import computeM
from qkmismatch.quantum import analytic, statevector
from qkmismatch.quantum.analytic import (
    amplitudeEstimationDistribution,
    analyticCountSample,
    analyticGroverSample,
    fejerKernel,
    groverOutcome,
    groverSuccessProbability,
    sampleAmplified,
)
from qkmismatch.quantum.backend import BackendHandle, BackendKind
from qkmismatch.quantum.circuits import FlaggedIndexCircuit, UniformSearchCircuit
from qkmismatch.reference import countingErrorBound
from tolerances import binomialSlack


def test_fejer_kernel_peaks_at_integers_multiple_of_rounds():
    assert fejerKernel(np.array([0.0, 16.0, -16.0]), 16) == pytest.approx([1.0, 1.0, 1.0])
    assert fejerKernel(np.array([1.0, 5.0]), 16) == pytest.approx([0.0, 0.0], abs=1e-20)


def test_no_marked_items(rng):
    counter = QueryCounter()
    estimates = {analyticCountSample(1024, 0, 100, rng, counter).tPrime for _ in range(50)}

    assert estimates == {0.0}
    assert counter.snapshot() == 50 * 100


def test_all_marked_is_point_mass_at_half_phase():
    distribution = amplitudeEstimationDistribution(64, 64, 32)
    assert distribution.probabilities[16] == pytest.approx(1.0)


def test_distribution_supports_any_rounds():
    distribution = amplitudeEstimationDistribution(1000, 37, 905)

    assert distribution.probabilities.sum() == pytest.approx(1.0, abs=1e-9)
    assert distribution.estimates.max() <= 1000


def test_cached_distribution_is_read_only():
    distribution = amplitudeEstimationDistribution(16, 4, 16)
    with pytest.raises(ValueError):
        distribution.probabilities[0] = 1.0


@pytest.mark.parametrize("size", [4, 8, 16])
@pytest.mark.parametrize("rounds", [4, 8, 16])
def test_backends_agree_on_estimation_distribution(size, rounds):
    for marked in range(size + 1):
        exact = statevector.amplitudeEstimationDistribution(size, marked, rounds)
        closed = analytic.amplitudeEstimationDistribution(size, marked, rounds)

        assert np.allclose(exact.estimates, closed.estimates)
        assert exact.totalVariation(closed) < 1e-9


def test_backend_handles_expose_the_same_distribution():
    exact = BackendHandle(BackendKind.EXACT).countDistribution(16, 4, 16)
    closed = BackendHandle(BackendKind.ANALYTIC).countDistribution(16, 4, 16)
    assert exact.totalVariation(closed) < 1e-9


def test_grover_sample_without_marked_items(rng):
    mask = np.zeros(32, dtype=bool)
    for _ in range(20):
        label, flag = analyticGroverSample(32, mask, 3, rng)
        assert not flag and not mask[label]


def test_grover_sample_forced_success(rng):
    mask = np.zeros(4, dtype=bool)
    mask[2] = True
    counter = QueryCounter()

    for _ in range(20):
        assert analyticGroverSample(4, mask, 1, rng, counter) == ((2,), True)
    assert counter.snapshot() == 20


@pytest.mark.parametrize("iterations", [0, 1, 5, 9, 13])
def test_grover_sample_frequencies_match_closed_form(rng, iterations):
    size, samples = 1024, 10_000
    mask = np.zeros(size, dtype=bool)
    mask[[17, 400, 999]] = True

    hits = 0
    for _ in range(samples):
        label, flag = analyticGroverSample(size, mask, iterations, rng)
        assert flag == bool(mask[label])
        hits += flag

    expected = math.sin((2 * iterations + 1) * math.asin(math.sqrt(3 / size))) ** 2
    assert abs(hits / samples - expected) <= binomialSlack(expected, samples, 4) + 1e-12


def test_amplification_preserves_distribution_within_class(rng):
    circuit = FlaggedIndexCircuit(np.array([0.1, 0.9, 0.5, 0.0]))
    mask = np.zeros((4, 2), dtype=bool)
    mask[:, 1] = True

    goodLabels = [sampleAmplified(circuit, mask, 1, rng)[0] for _ in range(3000)]
    flagged = [label[0] for label in goodLabels if label[1] == 1]

    # dentro da classe boa a chance de cada índice é proporcional à aceitação
    frequencies = np.bincount(flagged, minlength=4) / len(flagged)
    assert frequencies[3] == 0
    assert frequencies[1] == pytest.approx(0.9 / 1.5, abs=0.05)


def test_grover_success_probability():
    assert groverSuccessProbability(0.25, 1) == pytest.approx(1.0)
    assert groverSuccessProbability(0.0, 10) == 0.0
    assert groverSuccessProbability(1.0, 3) == pytest.approx(1.0)


def test_exact_and_analytic_grover_probabilities_agree():
    circuit = UniformSearchCircuit(8)
    mask = np.arange(8) == 5
    for iterations in range(6):
        assert statevector.groverSuccessProbability(circuit, mask, iterations) == pytest.approx(
            groverSuccessProbability(1 / 8, iterations), abs=1e-9
        )


def test_counting_guarantee_at_large_size(rng):
    bound = countingErrorBound(1024, 16, 904, 6)
    estimates = np.array([analyticCountSample(1024, 16, 904, rng).tPrime for _ in range(2000)])
    assert np.mean(np.abs(estimates - 16) <= bound) >= 0.9


@pytest.mark.slow
@pytest.mark.parametrize("marked", [4, 16, 64])
def test_counting_guarantee_with_decider_rounds(rng, marked):
    rounds = computeM(1024, marked, 1)
    bound = countingErrorBound(1024, marked, rounds, 6)

    estimates = np.array([analyticCountSample(1024, marked, rounds, rng).tPrime for _ in range(2000)])

    assert np.mean(np.abs(estimates - marked) <= bound) >= 0.85


def test_estimation_rejects_empty_search_space():
    with pytest.raises(ValueError):
        amplitudeEstimationDistribution(0, 0, 4)


def test_grover_outcome_does_not_depend_on_size(rng):
    counter = QueryCounter()
    size = 1 << 40

    assert all(groverOutcome(size, size // 4, 1, rng, counter) for _ in range(20))
    assert not groverOutcome(size, 0, 7, rng, counter)
    assert groverOutcome(size, size, 0, rng, counter)
    assert counter.snapshot() == 20 + 7


@pytest.mark.parametrize("marked", [3, 600])
def test_grover_sample_is_uniform_within_class(rng, marked):
    size, samples = 1024, 6000
    mask = np.zeros(size, dtype=bool)
    mask[:marked] = True

    labels = [analyticGroverSample(size, mask, 0, rng)[0][0] for _ in range(samples)]

    # sem iterações cada índice sai com probabilidade 1/N, nos dois ramos de amostragem
    halves = np.bincount(np.asarray(labels) * 2 // size, minlength=2) / samples
    assert halves[0] == pytest.approx(0.5, abs=binomialSlack(0.5, samples, 4))
    counts = np.bincount(labels, minlength=size)
    assert counts[:marked].sum() / samples == pytest.approx(marked / size, abs=binomialSlack(marked / size, samples, 4))


def test_uniform_fast_path_agrees_with_generic_sampling(rng):
    circuit = UniformSearchCircuit(64)
    mask = np.arange(64) % 9 == 0
    samples = 4000

    viaMask = sum(sampleAmplified(circuit, mask, 2, rng)[1] for _ in range(samples)) / samples
    viaFunction = sum(sampleAmplified(circuit, lambda label: label[0] % 9 == 0, 2, rng)[1] for _ in range(samples)) / samples

    expected = groverSuccessProbability(mask.mean(), 2)
    slack = binomialSlack(expected, samples, 4)
    assert viaMask == pytest.approx(expected, abs=slack)
    assert viaFunction == pytest.approx(expected, abs=slack)


def test_grover_sample_on_large_mask(rng):
    size = 1 << 22
    mask = np.zeros(size, dtype=bool)
    mask[[5, size - 1]] = True

    label, flag = analyticGroverSample(size, mask, 0, rng)
    assert flag == bool(mask[label])
