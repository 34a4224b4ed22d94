import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings as hypothesisSettings, strategies as st

from qkmismatch.common import QueryCounter
from qkmismatch.quantum.backend import BackendHandle
from qkmismatch.quantum.circuits import FlaggedIndexCircuit, UniformSearchCircuit
from qkmismatch.search.amplification import (
    QSearchConfig,
    gammaConstant,
    qsearchPrime,
    scheduleLength,
    worstCaseApplications,
)


def test_schedule_length_is_exact():
    assert scheduleLength(Fraction(6, 5), 1) == 2
    assert scheduleLength(Fraction(6, 5), 5) == 3
    assert scheduleLength(Fraction(3, 2), 2) == 3


@pytest.mark.parametrize("size, levels", [(16, 29), (1024, 40)])
def test_number_of_rounds(settings, size, levels):
    assert QSearchConfig.fromSettings(settings.qsearch, 2 * size).L == levels


def test_minimum_number_of_rounds():
    assert QSearchConfig(C=12, T=1).L >= 12
    assert QSearchConfig(C=1, alphaQ=0.1, T=4).L == 1


@pytest.mark.parametrize("field, value", [("c", Fraction(2)), ("c", Fraction(1)), ("C", 0), ("alphaQ", 0.0), ("T", 0.5)])
def test_invalid_configuration(field, value):
    with pytest.raises(ValueError):
        QSearchConfig(**{field: value})


def test_worst_case_with_single_round():
    assert worstCaseApplications(QSearchConfig(C=1, alphaQ=0.1), 2) == 6
    with pytest.raises(ValueError):
        worstCaseApplications(QSearchConfig(), 1)


def test_gamma_bounds_worst_case():
    cfg = QSearchConfig()
    previous = 0
    for exponent in range(1, 21):
        size = 1 << exponent
        worst = worstCaseApplications(cfg, size)
        gamma = gammaConstant(cfg, size)

        assert worst >= previous
        assert worst <= gamma * math.sqrt(size)
        assert (gamma - 1) * math.sqrt(size) < worst
        assert gamma < 1000
        previous = worst


def test_no_marked_item_runs_every_round(analytic, rng):
    cfg = QSearchConfig()
    counter = QueryCounter()

    result = qsearchPrime(UniformSearchCircuit(16), np.zeros(16, dtype=bool), 32, cfg, analytic, rng, counter)

    assert not result.found
    assert result.rounds == cfg.withT(32).L
    assert result.queries == counter.snapshot()
    assert result.iterationsUsed == result.rounds + result.queries
    assert result.applications == 2 * result.rounds + 2 * result.queries
    assert result.applications <= worstCaseApplications(cfg, 16)
    assert result.iterationsUsed <= cfg.withT(32).maxIterations()


def test_everything_marked_stops_at_first_sample(analytic, rng):
    result = qsearchPrime(UniformSearchCircuit(8), np.ones(8, dtype=bool), 16, QSearchConfig(), analytic, rng)

    assert result.found
    assert result.rounds == 1
    assert result.iterationsUsed == 1
    assert result.applications == 1
    assert result.queries == 0


def test_single_marked_item_is_found(analytic, rng):
    chi = np.zeros(64, dtype=bool)
    chi[37] = True
    circuit = UniformSearchCircuit(64)

    results = [qsearchPrime(circuit, chi, 128, QSearchConfig(), analytic, rng) for _ in range(1000)]

    assert np.mean([result.found for result in results]) >= 0.75
    assert all(result.outcome == (37,) for result in results if result.found)


def test_single_marked_item_on_exact_backend(exact, rng):
    chi = np.zeros(16, dtype=bool)
    chi[5] = True
    circuit = UniformSearchCircuit(16)

    found = [qsearchPrime(circuit, chi, 32, QSearchConfig(), exact, rng).found for _ in range(100)]

    assert np.mean(found) >= 0.75


def test_mostly_marked_flagged_circuit(analytic, rng):
    circuit = FlaggedIndexCircuit(np.full(8, 0.8))
    chi = np.zeros((8, 2), dtype=bool)
    chi[:, 1] = True

    found = [qsearchPrime(circuit, chi, 2, QSearchConfig(), analytic, rng).found for _ in range(500)]

    assert np.mean(found) >= 0.70


@hypothesisSettings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.data())
def test_found_outcome_satisfies_predicate(qubits, data):
    size = 1 << qubits
    chi = np.array(data.draw(st.lists(st.booleans(), min_size=size, max_size=size)))
    seed = data.draw(st.integers(0, 2 ** 32 - 1))
    T = data.draw(st.floats(1, 4 * size))

    result = qsearchPrime(UniformSearchCircuit(size), chi, T, QSearchConfig(), BackendHandle(), np.random.default_rng(seed))

    if result.found:
        assert chi[result.outcome]
    if not chi.any():
        assert not result.found
    assert result.rounds <= QSearchConfig(T=T).L
