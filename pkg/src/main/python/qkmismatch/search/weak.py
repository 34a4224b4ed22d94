"""Busca fraca sobre um decisor de erro limitado com entradas neutras.

Cada rótulo ``j`` é positivo (``F(j) = 1``), negativo (``F(j) = 0``) ou neutro
(``F(j) = 2``). O decisor só promete acertar com probabilidade 2/3 nos dois
primeiros casos; nos neutros a resposta é livre. A busca amplifica o
auxiliar "sorteia ``j`` e vota ``r`` vezes" com QSearch' e ``χ_N(j, b) = b``.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Optional, Sequence

import numpy as np
import scipy.stats
from dataclasses import dataclass

from ..common import Label, QueryCounter, isPowerOfTwo
from ..quantum.backend import BackendHandle
from ..quantum.circuits import FlaggedIndexCircuit
from ..settings import BoostSettings
from .amplification import QSearchConfig, gammaConstant, qsearchPrime, worstCaseApplications

logger = logging.getLogger(__name__)

BOOST_CONSTANT = 18
MIN_LAMBDA = 4


class BoundedErrorDecider(ABC):
    """Decisor ``D`` sobre os rótulos ``[0..N)``, consultado pela busca fraca."""

    @property
    @abstractmethod
    def size(self) -> int:
        ...

    @property
    def queriesPerRun(self) -> int:
        """Rodadas de oráculo gastas por uma execução de ``D``."""

        return 1

    @abstractmethod
    def acceptanceProbability(self, label: int) -> float:
        """Probabilidade exata de ``D`` responder 1 em ``label``."""

    def acceptanceProbabilities(self) -> np.ndarray:
        return np.array([self.acceptanceProbability(label) for label in range(self.size)], dtype=float)

    def decide(self, label: int, rng: np.random.Generator, counter: Optional[QueryCounter] = None) -> int:
        """Uma execução de ``D`` sobre ``label``."""

        if counter is not None:
            counter.add(self.queriesPerRun)
        return int(rng.random() < self.acceptanceProbability(label))

    def votes(self, label: int, repetitions: int, rng: np.random.Generator) -> int:
        """Número de respostas 1 em ``repetitions`` execuções independentes."""

        return int(rng.binomial(repetitions, self.acceptanceProbability(label)))


class TableDecider(BoundedErrorDecider):
    """Decisor dado por uma tabela de probabilidades de aceitação por rótulo."""

    def __init__(self, acceptance: Sequence[float]) -> None:
        self._acceptance = np.asarray(acceptance, dtype=float)
        if not isPowerOfTwo(len(self._acceptance)):
            raise ValueError(f"N = {len(self._acceptance)} deve ser potência de dois")

    @classmethod
    def exact(cls, labels: Sequence[int], neutralAnswer: float = 1.0) -> "TableDecider":
        """Decisor perfeito para a tricotomia ``labels`` (neutros aceitos com ``neutralAnswer``)."""

        table = [1.0 if label == 1 else (neutralAnswer if label == 2 else 0.0) for label in labels]
        return cls(table)

    @classmethod
    def promise(cls, labels: Sequence[int], correctness: float = 2 / 3, neutralAnswer: float = 0.5) -> "TableDecider":
        """Acerta com probabilidade exatamente ``correctness`` nos rótulos prometidos."""

        table = [
            correctness if label == 1 else (neutralAnswer if label == 2 else 1.0 - correctness)
            for label in labels
        ]
        return cls(table)

    @property
    def size(self) -> int:
        return len(self._acceptance)

    def acceptanceProbability(self, label: int) -> float:
        return float(self._acceptance[label])

    def acceptanceProbabilities(self) -> np.ndarray:
        return self._acceptance.copy()


def requiredRepetitions(lam: int, size: int, constant: int = BOOST_CONSTANT) -> int:
    """``r = ⌈constant·λ·ln N⌉`` votos; por Hoeffding o erro fica abaixo de ``N^{−λ}``."""

    return math.ceil(constant * lam * math.log(size))


def lambdaFor(gamma: int, minimum: int = MIN_LAMBDA) -> int:
    """Menor ``λ ≥ minimum`` com ``4γ 2^{−λ+1/2} ≤ 1/9``."""

    lam = max(minimum, math.ceil(0.5 + math.log2(36 * gamma)))
    while 4 * gamma * 2 ** (-lam + 0.5) > 1 / 9:
        lam += 1
    return lam


@dataclass(frozen=True)
class BoostConfig:
    """Constantes ``λ``, ``γ`` e o número de votos ``r`` para um espaço de tamanho ``N``."""

    lam: int
    gamma: int
    repetitions: int
    size: int
    constant: int = BOOST_CONSTANT

    def __post_init__(self) -> None:
        if self.lam < MIN_LAMBDA:
            raise ValueError(f"λ deve ser pelo menos {MIN_LAMBDA}, recebido {self.lam}")
        if 4 * self.gamma * 2 ** (-self.lam + 0.5) > 1 / 9:
            raise ValueError(f"λ = {self.lam} pequeno demais para γ = {self.gamma}")
        if self.repetitions < requiredRepetitions(self.lam, self.size, self.constant):
            raise ValueError(f"r = {self.repetitions} abaixo de {self.constant}·λ·ln N")

    @classmethod
    def forSize(
        cls, size: int, qsearch: QSearchConfig, settings: Optional[BoostSettings] = None
    ) -> "BoostConfig":
        settings = BoostSettings() if settings is None else settings
        gamma = gammaConstant(qsearch, size)
        lam = lambdaFor(gamma, settings.minLambda)
        repetitions = requiredRepetitions(lam, size, settings.constant)

        logger.debug("Busca fraca com N=%d: γ=%d, λ=%d, r=%d", size, gamma, lam, repetitions)
        return cls(lam, gamma, repetitions, size, settings.constant)


def boostedAcceptance(acceptance: np.ndarray, repetitions: int) -> np.ndarray:
    """``P[Binomial(r, q) > r/2]``: chance de a maioria dos votos ser 1."""

    return scipy.stats.binom.sf(repetitions // 2, repetitions, np.asarray(acceptance, dtype=float))


def successBoosting(
    decider: BoundedErrorDecider,
    lam: int,
    label: int,
    size: int,
    rng: np.random.Generator,
    constant: int = BOOST_CONSTANT,
) -> int:
    """Voto da maioria em ``r = ⌈constant·λ·ln N⌉`` execuções de ``D`` sobre ``label``."""

    repetitions = requiredRepetitions(lam, size, constant)
    return int(2 * decider.votes(label, repetitions, rng) > repetitions)


def weakSearchAuxiliary(
    decider: BoundedErrorDecider, size: int, cfg: BoostConfig, rng: np.random.Generator
) -> Label:
    """Sorteia ``j`` uniforme em ``[0..N)`` e devolve ``(j, b)`` com ``b`` o voto reforçado."""

    if size < 2 or not isPowerOfTwo(size):
        raise ValueError(f"N = {size} deve ser potência de dois maior ou igual a 2")

    label = int(rng.integers(0, size))
    return label, successBoosting(decider, cfg.lam, label, size, rng, cfg.constant)


class AuxiliaryCircuit(FlaggedIndexCircuit):
    """O auxiliar da busca fraca como circuito de preparação.

    A forma coerente (índice uniforme e flag rodada para a aceitação
    reforçada) é usada nas execuções de Grover; a medida direta segue o
    caminho clássico de ``weakSearchAuxiliary``, que tem a mesma distribuição.
    """

    def __init__(self, decider: BoundedErrorDecider, cfg: BoostConfig) -> None:
        super().__init__(boostedAcceptance(decider.acceptanceProbabilities(), cfg.repetitions))
        self.decider = decider
        self.cfg = cfg

    def sample(self, rng: np.random.Generator) -> Label:
        return weakSearchAuxiliary(self.decider, self.size, self.cfg, rng)


def flagPredicate(size: int) -> np.ndarray:
    """Máscara de ``χ_N(j, b) = b``."""

    mask = np.zeros((size, 2), dtype=bool)
    mask[:, 1] = True
    return mask


@dataclass(frozen=True)
class WeakSearchResult:
    label: int
    flag: int
    deciderInvocations: int
    queries: int
    applications: int


def weakSearch(
    decider: BoundedErrorDecider,
    size: int,
    qsearch: QSearchConfig,
    boost: BoostConfig,
    backend: BackendHandle,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
) -> WeakSearchResult:
    """QSearch'(auxiliar, χ_N, 2N) no máximo duas vezes; ``(0, 0)`` se nada for achado.

    Cada aplicação do auxiliar custa ``r`` execuções de ``D``.
    """

    if size < 2 or not isPowerOfTwo(size):
        raise ValueError(f"N = {size} deve ser potência de dois maior ou igual a 2")
    if decider.size != size or boost.size != size:
        raise ValueError("decisor, configuração e N com tamanhos diferentes")

    circuit = AuxiliaryCircuit(decider, boost)
    chi = flagPredicate(size)
    label, flag, applications = 0, 0, 0

    for attempt in range(2):
        # As rodadas de χ_N são leituras clássicas da flag, não consultas a D
        result = qsearchPrime(circuit, chi, 2 * size, qsearch, backend, rng, QueryCounter())
        applications += result.applications
        logger.debug("Busca fraca, tentativa %d: %s", attempt + 1, result)
        if result.found:
            label, flag = result.outcome[0], 1
            break

    invocations = applications * boost.repetitions
    queries = invocations * decider.queriesPerRun
    if counter is not None:
        counter.add(queries)

    budget = 2 * worstCaseApplications(qsearch, size) * boost.repetitions
    assert invocations <= budget, f"{invocations} execuções de D excedem o orçamento {budget}"

    return WeakSearchResult(label, flag, invocations, queries, applications)


def weakSearchFalsePositiveBound(qsearch: QSearchConfig, boost: BoostConfig) -> float:
    """``4·L·N^{−λ}``: chance de algum voto reforçado errar em um negativo."""

    levels = qsearch.withT(2 * boost.size).L
    return 4 * levels * float(boost.size) ** (-boost.lam)


def auxiliarySuccessLowerBound(size: int, lam: int) -> float:
    """``(1 − N^{−λ}) / N``: chance mínima de ``b = 1`` quando existe um positivo."""

    return (1 - float(size) ** (-lam)) / size
