"""Simulação exata (vetor de estado) de Grover e da estimativa de amplitude.

As medidas intermediárias são simuladas de forma explícita, com controle
clássico em seguida; pelo princípio da medida adiada o resultado tem a mesma
distribuição do circuito totalmente coerente.
"""

import functools
import logging
from typing import Optional, Tuple

import numpy as np

from ..common import EstimateDistribution, CountEstimate, Label, QueryCounter, isPowerOfTwo, log2Exact
from .circuits import PreparableCircuit, UniformSearchCircuit
from .state import (
    DEFAULT_QUBIT_CAP,
    Marking,
    QState,
    Register,
    applyPhaseFlipZero,
    applyPredicatePhase,
    checkQubits,
    isMarked,
    predicateMask,
)

logger = logging.getLogger(__name__)

PHASE = "phase"

DISTRIBUTION_CACHE_SIZE = 256


def groverIterate(
    state: QState, circuit: PreparableCircuit, chi: Marking, counter: Optional[QueryCounter] = None
) -> QState:
    """Uma aplicação de ``Q(A, χ) = −A S₀ A⁻¹ S_χ``."""

    state = applyPredicatePhase(state, chi, counter)
    state = circuit.applyInverse(state)
    state = applyPhaseFlipZero(state)
    state = circuit.apply(state)
    return state.withTensor(-state.tensor)


def groverPowerState(
    circuit: PreparableCircuit,
    chi: Marking,
    iterations: int,
    counter: Optional[QueryCounter] = None,
    qubitCap: int = DEFAULT_QUBIT_CAP,
) -> QState:
    """Estado ``Q^j A|0⟩`` antes da medida."""

    if iterations < 0:
        raise ValueError(f"número de iterações negativo: {iterations}")

    state = circuit.prepare(qubitCap)
    mask = predicateMask(state.shape, chi)
    for _ in range(iterations):
        state = groverIterate(state, circuit, mask, counter)
    return state


def groverSuccessProbability(
    circuit: PreparableCircuit, chi: Marking, iterations: int, qubitCap: int = DEFAULT_QUBIT_CAP
) -> float:
    state = groverPowerState(circuit, chi, iterations, qubitCap=qubitCap)
    return float(state.probabilities()[predicateMask(state.shape, chi)].sum())


def groverPower(
    circuit: PreparableCircuit,
    chi: Marking,
    iterations: int,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
    qubitCap: int = DEFAULT_QUBIT_CAP,
) -> Tuple[Label, bool]:
    """Prepara ``A|0⟩``, aplica ``Q^j`` e mede; a flag diz se o rótulo satisfaz ``χ``."""

    state = groverPowerState(circuit, chi, iterations, counter, qubitCap)
    label = state.measure(rng)
    return label, isMarked(chi, label)


def _estimationDistribution(size: int, marked: np.ndarray, rounds: int, qubitCap: int) -> EstimateDistribution:
    circuit = UniformSearchCircuit(size)
    layout = (Register(PHASE, log2Exact(rounds)),) + circuit.layout
    checkQubits(layout, qubitCap)
    return _cachedDistribution(size, np.packbits(marked).tobytes(), rounds)


@functools.lru_cache(maxsize=DISTRIBUTION_CACHE_SIZE)
def _cachedDistribution(size: int, packedMask: bytes, rounds: int) -> EstimateDistribution:
    marked = np.unpackbits(np.frombuffer(packedMask, dtype=np.uint8), count=size).astype(bool)
    circuit = UniformSearchCircuit(size)
    layout = (Register(PHASE, log2Exact(rounds)),) + circuit.layout
    # o limite de qubits já foi verificado por quem chama
    qubitCap = sum(register.qubits for register in layout)

    # Linha y do tensor conjunto: Q^y A|0⟩ / √M (controle pelo registrador de fase)
    rows = np.empty((rounds, size), dtype=complex)
    state = circuit.prepare(qubitCap)
    for y in range(rounds):
        rows[y] = state.tensor
        if y + 1 < rounds:
            state = groverIterate(state, circuit, marked)
    joint = QState(layout, rows / np.sqrt(rounds), qubitCap)

    # QFT inversa no registrador de fase
    transformed = joint.withTensor(np.fft.fft(joint.tensor, axis=0, norm="ortho"))
    probabilities = transformed.probabilities([PHASE])

    outcomes = np.arange(rounds)
    distribution = EstimateDistribution(
        size=size,
        rounds=rounds,
        estimates=size * np.sin(np.pi * outcomes / rounds) ** 2,
        probabilities=probabilities,
    )
    logger.debug("Distribuição de contagem exata: N=%d, t=%d, M=%d", size, int(marked.sum()), rounds)

    distribution.probabilities.setflags(write=False)
    distribution.estimates.setflags(write=False)
    return distribution


def amplitudeEstimationDistribution(
    size: int, marked: int, rounds: int, qubitCap: int = DEFAULT_QUBIT_CAP
) -> EstimateDistribution:
    """Distribuição exata de ``t' = N sin²(πy/M)`` com os rótulos ``[0, t)`` marcados."""

    if not (isPowerOfTwo(size) and isPowerOfTwo(rounds)):
        raise ValueError(f"N = {size} e M = {rounds} devem ser potências de dois")
    if not (0 <= marked <= size):
        raise ValueError(f"t = {marked} fora de [0, {size}]")

    return _estimationDistribution(size, np.arange(size) < marked, rounds, qubitCap)


def sampleAmplitudeEstimate(
    chi: np.ndarray,
    rounds: int,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
    qubitCap: int = DEFAULT_QUBIT_CAP,
) -> CountEstimate:
    """Uma execução da contagem quântica sobre a máscara ``chi``.

    Cobra ``M`` rodadas: ``M − 1`` aplicações controladas de ``Q`` e uma
    preparação.
    """

    if not isPowerOfTwo(rounds):
        raise ValueError(f"M = {rounds} deve ser potência de dois")
    marked = np.asarray(chi, dtype=bool)
    if not isPowerOfTwo(len(marked)):
        raise ValueError(f"N = {len(marked)} deve ser potência de dois")

    distribution = _estimationDistribution(len(marked), marked, rounds, qubitCap)
    if counter is not None:
        counter.add(rounds)
    return CountEstimate(distribution.sample(rng), rounds)
