"""Busca aproximada de uma janela com no máximo ``k`` diferenças.

O decisor de posição roda o decisor de Hamming sobre ``T[j..j+m)`` e a busca
fraca procura uma posição aceita em ``[0..N)``, com ``N`` a menor potência de
dois que cobre as ``n − m + 1`` janelas.
"""

import json
import logging
import time
from typing import Any, Dict, Optional

import numpy as np
from dataclasses import dataclass, field

from ..common import MatchInstance, QueryCounter, RngSeed
from ..quantum.backend import BackendHandle
from ..reference import hammingDistance
from ..search.amplification import QSearchConfig
from ..search.weak import BoostConfig, BoundedErrorDecider, weakSearch
from ..settings import Settings
from .decider import COUNT_CONFIDENCE, approxBoundedHammingDecider, deciderAcceptance, deriveDeciderParams

logger = logging.getLogger(__name__)


class PositionDecider(BoundedErrorDecider):
    """Decisor da posição ``j``: 0 fora de ``[0..n−m]``, senão o decisor de Hamming."""

    def __init__(self, inst: MatchInstance, backend: BackendHandle, confidence: int = COUNT_CONFIDENCE) -> None:
        self.inst = inst
        self.backend = backend
        self.confidence = confidence
        self.shortCircuit = inst.k >= inst.m
        self.params = None if self.shortCircuit else deriveDeciderParams(inst.m, inst.k, inst.epsilon, confidence)
        self._cache: Dict[int, float] = {}

    @property
    def size(self) -> int:
        return self.inst.searchSize

    @property
    def queriesPerRun(self) -> int:
        if self.params is None:
            return 0
        return self.backend.countingRounds(self.params.M)

    def acceptanceProbability(self, label: int) -> float:
        if label > self.inst.lastPosition:
            return 0.0
        if self.params is None:
            return 1.0

        # a aceitação só depende do número de diferenças, nos dois backends
        mismatches = int(hammingDistance(self.inst.window(label), self.inst.pattern))
        if mismatches not in self._cache:
            self._cache[mismatches] = deciderAcceptance(mismatches, self.params, self.backend)
        return self._cache[mismatches]

    def decide(self, label: int, rng: np.random.Generator, counter: Optional[QueryCounter] = None) -> int:
        if label > self.inst.lastPosition:
            return 0
        return approxBoundedHammingDecider(
            self.inst.window(label),
            self.inst.pattern,
            self.inst.k,
            self.inst.epsilon,
            self.backend,
            rng,
            counter,
            self.confidence,
        )


def positionDecider(
    inst: MatchInstance,
    position: int,
    backend: BackendHandle,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
    confidence: int = COUNT_CONFIDENCE,
) -> int:
    if not (0 <= position < inst.searchSize):
        raise ValueError(f"posição {position} fora de [0..{inst.searchSize})")
    return PositionDecider(inst, backend, confidence).decide(position, rng, counter)


@dataclass(frozen=True)
class MatchReport:
    """Resultado ``(j', flag)`` de uma execução do casamento aproximado.

    ``recheckDistance`` é a distância exata da janela ``j'`` ao padrão,
    calculada classicamente quando ``flag = 1``.
    """

    position: int
    flag: int
    queries: int
    backend: str
    seed: RngSeed
    recheckDistance: Optional[int]
    wallTime: float = field(default=0.0, compare=False)

    def toJson(self) -> Dict[str, Any]:
        return {
            "position": self.position,
            "flag": self.flag,
            "queries": self.queries,
            "backend": self.backend,
            "seed": {"master": self.seed.masterSeed, "stream": self.seed.streamIndex},
            "recheck_distance": self.recheckDistance,
        }

    def dumps(self) -> str:
        return json.dumps(self.toJson(), sort_keys=True)


def approxBoundedDistMatching(
    inst: MatchInstance,
    backend: BackendHandle,
    seed: RngSeed,
    settings: Optional[Settings] = None,
    counter: Optional[QueryCounter] = None,
) -> MatchReport:
    """Encontra ``j'`` com ``δ_H(T[j'..j'+m), P) <= (1+ε)k`` se houver janela a distância ``<= k``.

    As duas garantias valem com probabilidade pelo menos 2/3; sem janela a
    distância ``<= (1+ε)k`` a flag é 0.
    """

    settings = Settings() if settings is None else settings
    counter = QueryCounter() if counter is None else counter
    start = time.perf_counter()

    size = inst.searchSize
    decider = PositionDecider(inst, backend, settings.count.confidence)
    qsearch = QSearchConfig.fromSettings(settings.qsearch, T=2 * size)
    boost = BoostConfig.forSize(size, qsearch, settings.boost)

    before = counter.snapshot()
    result = weakSearch(decider, size, qsearch, boost, backend, seed.generator(), counter)

    recheck = None
    if result.flag == 1:
        if result.label > inst.lastPosition:
            raise AssertionError(f"posição {result.label} aceita fora de [0..{inst.lastPosition}]")
        recheck = int(hammingDistance(inst.window(result.label), inst.pattern))

    report = MatchReport(
        position=result.label,
        flag=result.flag,
        queries=counter.snapshot() - before,
        backend=backend.kind.value,
        seed=seed,
        recheckDistance=recheck,
        wallTime=time.perf_counter() - start,
    )
    logger.debug("Casamento: %s", report)
    return report
