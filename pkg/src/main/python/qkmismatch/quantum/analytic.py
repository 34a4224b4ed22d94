"""Backend analítico: amostra das distribuições fechadas das sub-rotinas quânticas.

Serve de substituto direto ao vetor de estado quando ``N`` é grande. Só são
usadas fórmulas exatas (probabilidade de Grover e núcleo de Fejér da
estimativa de fase), nunca aproximações gaussianas.
"""

import functools
import math
from typing import Optional, Tuple

import numpy as np

from ..common import CountEstimate, EstimateDistribution, Label, QueryCounter
from .circuits import PreparableCircuit, UniformSearchCircuit
from .state import Marking, predicateMask

KERNEL_EPSILON = 1e-12


def fejerKernel(delta: np.ndarray, rounds: int) -> np.ndarray:
    """``sin²(πδ) / (M² sin²(πδ/M))``, com valor 1 nos múltiplos de ``M``."""

    delta = np.asarray(delta, dtype=float)
    denominator = (rounds ** 2) * np.sin(np.pi * delta / rounds) ** 2
    singular = denominator < KERNEL_EPSILON
    safe = np.where(singular, 1.0, denominator)
    return np.where(singular, 1.0, np.sin(np.pi * delta) ** 2 / safe)


def phaseEstimationProbabilities(theta: float, rounds: int) -> np.ndarray:
    """Probabilidade de cada fase ``y ∈ [0..M)`` para o ângulo ``θ`` (autovalores ``e^{±2iθ}``)."""

    outcomes = np.arange(rounds)
    shift = rounds * theta / math.pi
    probabilities = 0.5 * fejerKernel(outcomes - shift, rounds) + 0.5 * fejerKernel(outcomes + shift, rounds)
    return probabilities / probabilities.sum()


@functools.lru_cache(maxsize=4096)
def amplitudeEstimationDistribution(size: int, marked: int, rounds: int) -> EstimateDistribution:
    if size < 1:
        raise ValueError(f"N = {size} deve ser pelo menos 1")
    if not (0 <= marked <= size):
        raise ValueError(f"t = {marked} fora de [0, {size}]")
    if rounds < 2:
        raise ValueError(f"M = {rounds} deve ser pelo menos 2")

    theta = math.asin(math.sqrt(marked / size))
    probabilities = phaseEstimationProbabilities(theta, rounds)
    estimates = size * np.sin(np.pi * np.arange(rounds) / rounds) ** 2

    # o cache compartilha os arrays; impede alterações acidentais
    probabilities.setflags(write=False)
    estimates.setflags(write=False)
    return EstimateDistribution(size, rounds, estimates, probabilities)


def analyticCountSample(
    size: int, marked: int, rounds: int, rng: np.random.Generator, counter: Optional[QueryCounter] = None
) -> CountEstimate:
    distribution = amplitudeEstimationDistribution(size, marked, rounds)
    if counter is not None:
        counter.add(rounds)
    return CountEstimate(distribution.sample(rng), rounds)


def groverSuccessProbability(successProbability: float, iterations: int) -> float:
    """``sin²((2j+1)θ)`` com ``θ = asin(√a)``."""

    theta = math.asin(math.sqrt(min(1.0, max(0.0, successProbability))))
    return math.sin((2 * iterations + 1) * theta) ** 2


def sampleAmplified(
    circuit: PreparableCircuit,
    chi: Marking,
    iterations: int,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
) -> Tuple[Label, bool]:
    """Amostra a medida de ``Q^j A|0⟩`` sem simular amplitudes.

    A amplificação só muda o peso total das classes boa e ruim; dentro de
    cada classe a distribuição de ``A|0⟩`` é preservada.
    """

    if isinstance(circuit, UniformSearchCircuit) and isinstance(chi, np.ndarray):
        return analyticGroverSample(circuit.size, chi, iterations, rng, counter)

    if iterations < 0:
        raise ValueError(f"número de iterações negativo: {iterations}")

    probabilities = circuit.labelProbabilities()
    mask = predicateMask(probabilities.shape, chi)
    goodMass = float(probabilities[mask].sum())
    badMass = float(probabilities[~mask].sum())

    if counter is not None:
        counter.add(iterations)

    if badMass <= 0.0:
        good = True
    elif goodMass <= 0.0:
        good = False
    else:
        good = bool(rng.random() < groverSuccessProbability(goodMass / (goodMass + badMass), iterations))

    weights = np.where(mask == good, probabilities, 0.0).reshape(-1)
    outcome = rng.choice(len(weights), p=weights / weights.sum())
    label = tuple(int(value) for value in np.unravel_index(outcome, probabilities.shape))
    return label, good


def groverOutcome(
    size: int,
    marked: int,
    iterations: int,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
) -> bool:
    """Sorteia só a classe (boa ou ruim) da medida, em ``O(1)`` para qualquer ``N``."""

    if size < 1 or not (0 <= marked <= size):
        raise ValueError(f"t = {marked} fora de [0, {size}]")
    if iterations < 0:
        raise ValueError(f"número de iterações negativo: {iterations}")

    if counter is not None:
        counter.add(iterations)
    if marked in (0, size):
        return marked == size
    return bool(rng.random() < groverSuccessProbability(marked / size, iterations))


def _uniformMember(mask: np.ndarray, good: bool, count: int, rng: np.random.Generator) -> int:
    """Índice uniforme entre os ``count`` índices com ``mask == good``."""

    if 2 * count >= len(mask):
        while True:
            index = int(rng.integers(len(mask)))
            if mask[index] == good:
                return index
    return int(np.flatnonzero(mask == good)[rng.integers(count)])


def analyticGroverSample(
    size: int,
    chi: Marking,
    iterations: int,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
) -> Tuple[Label, bool]:
    """Grover com ``A`` uniforme sobre ``N`` rótulos; o sucesso tem probabilidade ``sin²((2j+1)θ)``.

    Com ``chi`` dado como máscara o custo é o de contar os marcados; uma
    função é avaliada rótulo a rótulo.
    """

    mask = predicateMask((size,), chi)
    marked = int(np.count_nonzero(mask))
    good = groverOutcome(size, marked, iterations, rng, counter)
    count = marked if good else size - marked
    return (_uniformMember(mask, good, count, rng),), good
