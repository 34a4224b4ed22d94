"""Amplificação de amplitude com agendamento exponencial (QSearch').

Cada rodada mede ``A|0⟩`` diretamente e, se o resultado não satisfaz ``χ``,
roda ``Q(A, χ)^j`` com ``j`` sorteado em ``[1..⌈c^l⌉]``. O número de rodadas é
limitado por ``L``, de forma que o custo no pior caso é conhecido de antemão.

Contagem de aplicações de ``A`` (fixa, para que ``γ`` seja reprodutível):

* medida direta: 1 aplicação;
* execução de Grover: 1 aplicação para preparar ``A|0⟩`` e 2 por iteração
  (``A`` e ``A⁻¹`` dentro de ``Q``).
"""

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from dataclasses import dataclass, replace

from ..common import Label, QueryCounter, toFraction
from ..quantum.backend import BackendHandle
from ..quantum.circuits import PreparableCircuit
from ..quantum.state import Marking, isMarked
from ..settings import QSearchSettings

logger = logging.getLogger(__name__)


def scheduleLength(c: Fraction, level: int) -> int:
    """``⌈c^l⌉`` calculado de forma exata."""

    return math.ceil(c ** level)


@dataclass(frozen=True)
class QSearchConfig:
    """Constantes ``c``, ``C``, ``α`` e o parâmetro ``T`` de QSearch'."""

    c: Fraction = Fraction(6, 5)
    C: int = 12
    alphaQ: float = 8.0
    T: float = 1.0

    def __post_init__(self) -> None:
        if not (1 < self.c < 2):
            raise ValueError(f"c deve estar em (1, 2), recebido {self.c}")
        if self.C < 1:
            raise ValueError(f"C deve ser positivo, recebido {self.C}")
        if self.alphaQ <= 0:
            raise ValueError(f"α deve ser positivo, recebido {self.alphaQ}")
        if self.T < 1:
            raise ValueError(f"T deve ser pelo menos 1, recebido {self.T}")

    @classmethod
    def fromSettings(cls, settings: QSearchSettings, T: float = 1.0) -> "QSearchConfig":
        return cls(toFraction(settings.c), settings.C, settings.alphaQ, T)

    @property
    def L(self) -> int:
        """``max(C, ⌈log(4α√T) / log c⌉)``."""

        return max(self.C, math.ceil(math.log(4 * self.alphaQ * math.sqrt(self.T)) / math.log(self.c)))

    def withT(self, T: float) -> "QSearchConfig":
        return replace(self, T=T)

    def maxIterations(self) -> int:
        """Limite superior de ``t``: ``1 + Σ_{l=1..L} (1 + ⌈c^l⌉)``."""

        return 1 + sum(1 + scheduleLength(self.c, level) for level in range(1, self.L + 1))


@dataclass(frozen=True)
class QSearchResult:
    """Saída ``(o, f)`` e o custo da execução."""

    outcome: Label
    found: bool
    queries: int  # rodadas de χ cobradas durante a execução
    iterationsUsed: int  # valor final de t
    applications: int  # aplicações de A e A⁻¹
    rounds: int  # rodadas l executadas


def qsearchPrime(
    circuit: PreparableCircuit,
    chi: Marking,
    T: float,
    cfg: QSearchConfig,
    backend: BackendHandle,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
) -> QSearchResult:
    """Executa QSearch'(A, χ, T); ``found = False`` não é erro."""

    cfg = cfg.withT(T)
    counter = QueryCounter() if counter is None else counter
    start = counter.snapshot()

    outcome: Label = tuple(0 for _ in circuit.layout)
    found = False
    iterations = 0
    applications = 0
    level = 0

    while level < cfg.L and not found:
        level += 1
        schedule = scheduleLength(cfg.c, level)
        iterations += 1

        label = circuit.sample(rng)
        applications += 1
        if isMarked(chi, label):
            outcome, found = label, True
            break

        j = int(rng.integers(1, schedule + 1))
        iterations += j
        label, marked = backend.groverSample(circuit, chi, j, rng, counter)
        applications += 1 + 2 * j
        if marked:
            outcome, found = label, True

        logger.debug("QSearch' rodada %d/%d: j=%d, M=%d, encontrado=%s", level, cfg.L, j, schedule, found)

    # Um resultado marcado é sempre conferido classicamente
    if found and not isMarked(chi, outcome):
        raise AssertionError(f"QSearch' devolveu {outcome}, que não satisfaz χ")

    return QSearchResult(
        outcome=outcome,
        found=found,
        queries=counter.snapshot() - start,
        iterationsUsed=iterations,
        applications=applications,
        rounds=level,
    )


def worstCaseApplications(cfg: QSearchConfig, size: int) -> int:
    """Máximo de aplicações de ``A`` em QSearch' com ``T = 2N``: ``Σ_{l=1..L} (2 + 2⌈c^l⌉)``."""

    if size < 2:
        raise ValueError(f"N deve ser pelo menos 2, recebido {size}")

    levels = cfg.withT(2 * size).L
    return sum(2 + 2 * scheduleLength(cfg.c, level) for level in range(1, levels + 1))


def gammaConstant(cfg: QSearchConfig, size: int) -> int:
    """Menor inteiro ``γ`` com ``worstCaseApplications ≤ γ√N``."""

    gamma = math.ceil(worstCaseApplications(cfg, size) / math.sqrt(size))
    while gamma * math.sqrt(size) < worstCaseApplications(cfg, size):
        gamma += 1
    return gamma
