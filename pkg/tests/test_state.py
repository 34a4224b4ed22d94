import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from qkmismatch.common import QueryCounter, StateTooLarge, UnknownRegister
from qkmismatch.quantum.circuits import FlaggedIndexCircuit, UniformSearchCircuit
from qkmismatch.quantum.state import (
    QState,
    Register,
    applyPhaseFlipZero,
    applyPredicatePhase,
    predicateMask,
)


def _uniform(qubits: int) -> QState:
    dimension = 1 << qubits
    return QState((Register("q", qubits),), np.full(dimension, 1 / np.sqrt(dimension), dtype=complex))


def _randomState(rng: np.random.Generator, layout) -> QState:
    shape = tuple(register.dimension for register in layout)
    tensor = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return QState(tuple(layout), tensor / np.linalg.norm(tensor))


def test_phase_flip_zero_on_uniform_state():
    flipped = applyPhaseFlipZero(_uniform(2), "q")
    assert np.allclose(flipped.amplitudes, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_phase_flip_zero_leaves_nonzero_basis_state():
    state = QState.zero((Register("q", 2),)).withTensor(np.array([0, 1, 0, 0], dtype=complex))
    assert np.array_equal(applyPhaseFlipZero(state, "q").tensor, state.tensor)


def test_phase_flip_zero_is_an_involution():
    state = _uniform(3)
    twice = applyPhaseFlipZero(applyPhaseFlipZero(state))
    assert np.max(np.abs(twice.tensor - state.tensor)) < 1e-12


def test_phase_flip_zero_on_one_register(rng):
    layout = (Register("index", 2), Register("flag", 1))
    state = _randomState(rng, layout)

    flipped = applyPhaseFlipZero(state, "flag")

    assert np.allclose(flipped.tensor[:, 0], -state.tensor[:, 0])
    assert np.allclose(flipped.tensor[:, 1], state.tensor[:, 1])


def test_unknown_register():
    with pytest.raises(UnknownRegister):
        applyPhaseFlipZero(_uniform(2), "phase")
    with pytest.raises(KeyError):
        _uniform(1).axis("flag")


def test_predicate_phase():
    state = _uniform(2)
    counter = QueryCounter()

    unchanged = applyPredicatePhase(state, lambda label: False, counter)
    negated = applyPredicatePhase(state, lambda label: True, counter)
    oneMarked = applyPredicatePhase(state, lambda label: label == (2,), counter)

    assert np.array_equal(unchanged.tensor, state.tensor)
    assert np.allclose(negated.tensor, -state.tensor)
    assert np.allclose(negated.probabilities(), state.probabilities())
    assert np.allclose(oneMarked.amplitudes, [0.5, 0.5, -0.5, 0.5])
    assert counter.snapshot() == 3


def test_predicate_mask_from_function_and_array():
    mask = predicateMask((4, 2), lambda label: label[1] == 1)
    assert mask.sum() == 4
    assert np.array_equal(predicateMask((4, 2), mask), mask)
    with pytest.raises(ValueError):
        predicateMask((8,), mask)


def test_qubit_cap():
    with pytest.raises(StateTooLarge):
        QState.zero((Register("index", 20), Register("phase", 5)))
    with pytest.raises(MemoryError):
        QState.zero((Register("index", 4),), qubitCap=3)


def test_marginal_probabilities_follow_requested_order(rng):
    layout = (Register("a", 1), Register("b", 2), Register("c", 1))
    state = _randomState(rng, layout)

    marginal = state.probabilities(["c", "a"])
    expected = state.probabilities().sum(axis=1).T

    assert marginal.shape == (2, 2)
    assert np.allclose(marginal, expected)
    assert state.probabilities(["b"]).sum() == pytest.approx(1.0)


def test_measure_returns_label_with_support(rng):
    state = QState.zero((Register("index", 2), Register("flag", 1)))
    tensor = np.zeros((4, 2), dtype=complex)
    tensor[3, 1] = 1.0
    assert state.withTensor(tensor).measure(rng) == (3, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_circuits_invert(qubits, seed):
    rng = np.random.default_rng(seed)
    size = 1 << qubits
    circuits = [UniformSearchCircuit(size), FlaggedIndexCircuit(rng.random(size))]

    for circuit in circuits:
        state = _randomState(rng, circuit.layout)
        roundTrip = circuit.applyInverse(circuit.apply(state))

        assert np.max(np.abs(roundTrip.tensor - state.tensor)) < 1e-9
        assert abs(circuit.apply(state).norm() - 1) < 1e-9


def test_prepared_distribution_matches_label_probabilities():
    acceptance = np.array([0.0, 0.25, 1.0, 0.5])
    circuit = FlaggedIndexCircuit(acceptance)

    prepared = circuit.prepare().probabilities()

    assert np.allclose(prepared, circuit.labelProbabilities(), atol=1e-12)
    assert np.allclose(prepared[:, 1], acceptance / 4)


@pytest.mark.parametrize("qubits", [1, 3, 5])
def test_hadamard_layer_matches_dense_matrix(qubits, rng):
    size = 1 << qubits
    layout = (Register("flag", 1), Register("index", qubits))
    state = _randomState(rng, layout)
    dense = scipy.linalg.hadamard(size) / np.sqrt(size)

    applied = UniformSearchCircuit(size).apply(state)

    expected = np.tensordot(state.tensor, dense, axes=([1], [1]))
    assert np.allclose(applied.tensor, expected, atol=1e-12)


def test_uniform_preparation_scales_past_dense_hadamard():
    size = 1 << 18
    prepared = UniformSearchCircuit(size).prepare()

    assert prepared.tensor.shape == (size,)
    assert np.allclose(prepared.tensor, 1 / np.sqrt(size), atol=1e-12)
