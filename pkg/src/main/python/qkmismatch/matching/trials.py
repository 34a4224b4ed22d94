"""Execução de tentativas independentes, agregação e varredura de custo.

A tentativa ``i`` usa sempre o fluxo filho ``i`` da semente mestre; os
resultados são devolvidos na ordem das tentativas, com ou sem processos
paralelos, e toda saída com ``flag = 1`` é conferida pelos oráculos clássicos.
"""

import csv
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.stats
from dataclasses import dataclass, field

from ..common import (
    EmptyPattern,
    EpsilonOutOfRange,
    MatchInstance,
    NonPositiveK,
    PatternLongerThanText,
    QueryCounter,
    RngSeed,
    ValidationError,
    deriveStream,
    mapList,
    toFraction,
)
from ..quantum.backend import BackendHandle
from ..reference import bruteForceKMismatch, hammingDistance, labelForDistance, trichotomy, TrichotomyLabel
from ..settings import Settings
from .decider import approxBoundedHammingDecider
from .instances import InfeasiblePlant, PlantKind, PlantSpec, generateInstance
from .matcher import MatchReport, approxBoundedDistMatching

logger = logging.getLogger(__name__)

BENCH_COLUMNS = [
    "n", "m", "k", "epsilon", "trials",
    "success_rate", "false_positive_rate", "mean_queries", "normalized_queries",
]


class TrialKind(Enum):
    MATCH = "match"
    DECIDE = "decide"


@dataclass(frozen=True)
class TrialSpec:
    """O que cada tentativa executa.

    Para ``DECIDE`` o texto da instância é ``X`` e o padrão é ``Y`` (``n = m``).
    """

    kind: TrialKind
    instance: MatchInstance
    backend: BackendHandle = field(default_factory=BackendHandle)
    settings: Settings = field(default_factory=Settings)


@dataclass(frozen=True)
class DecisionReport:
    answer: int
    queries: int
    backend: str
    seed: RngSeed
    distance: int

    def toJson(self) -> Dict[str, Any]:
        return {
            "answer": self.answer,
            "queries": self.queries,
            "backend": self.backend,
            "seed": {"master": self.seed.masterSeed, "stream": self.seed.streamIndex},
            "distance": self.distance,
        }

    def dumps(self) -> str:
        return json.dumps(self.toJson(), sort_keys=True)


TrialReport = Union[MatchReport, DecisionReport]


def runTrial(spec: TrialSpec, seed: RngSeed) -> TrialReport:
    if spec.kind is TrialKind.MATCH:
        return approxBoundedDistMatching(spec.instance, spec.backend, seed, spec.settings)

    inst = spec.instance
    counter = QueryCounter()
    answer = approxBoundedHammingDecider(
        inst.text,
        inst.pattern,
        inst.k,
        inst.epsilon,
        spec.backend,
        seed.generator(),
        counter,
        spec.settings.count.confidence,
    )
    return DecisionReport(answer, counter.snapshot(), spec.backend.kind.value, seed, int(hammingDistance(inst.text, inst.pattern)))


def wilsonInterval(successes: int, trials: int, confidence: float = 0.99) -> Tuple[float, float]:
    """Intervalo de Wilson para a proporção ``successes / trials``."""

    if trials < 1:
        raise ValueError("é preciso pelo menos uma tentativa")

    z = float(scipy.stats.norm.ppf(1 - (1 - confidence) / 2))
    rate = successes / trials
    denominator = 1 + z ** 2 / trials
    center = (rate + z ** 2 / (2 * trials)) / denominator
    halfWidth = z * math.sqrt(rate * (1 - rate) / trials + z ** 2 / (4 * trials ** 2)) / denominator
    return max(0.0, center - halfWidth), min(1.0, center + halfWidth)


@dataclass(frozen=True)
class TrialAggregate:
    trials: int
    successCount: int
    falsePositiveCount: int
    meanQueries: float
    successInterval: Tuple[float, float]
    confidence: float

    @property
    def successRate(self) -> float:
        return self.successCount / self.trials

    @property
    def falsePositiveRate(self) -> float:
        return self.falsePositiveCount / self.trials

    @property
    def halfWidth(self) -> float:
        low, high = self.successInterval
        return (high - low) / 2

    def toJson(self) -> Dict[str, Any]:
        return {
            "trials": self.trials,
            "success_count": self.successCount,
            "false_positive_count": self.falsePositiveCount,
            "mean_queries": self.meanQueries,
            "success_interval": list(self.successInterval),
            "confidence": self.confidence,
        }


def judgeTrial(spec: TrialSpec, report: TrialReport) -> Tuple[bool, bool]:
    """``(sucesso, falso positivo)`` de uma tentativa, julgados com distâncias exatas."""

    inst = spec.instance

    if isinstance(report, DecisionReport):
        label = labelForDistance(report.distance, inst.k, inst.epsilon)
        falsePositive = report.answer == 1 and label is TrichotomyLabel.NEGATIVE
        if label is TrichotomyLabel.POSITIVE:
            return report.answer == 1, falsePositive
        if label is TrichotomyLabel.NEGATIVE:
            return report.answer == 0, falsePositive
        return True, falsePositive

    accepted = report.flag == 1 and report.recheckDistance is not None and (
        labelForDistance(report.recheckDistance, inst.k, inst.epsilon) is not TrichotomyLabel.NEGATIVE
    )
    falsePositive = report.flag == 1 and not accepted

    if bruteForceKMismatch(inst) is not None:
        return accepted, falsePositive
    if not np.any(trichotomy(inst) == int(TrichotomyLabel.NEUTRAL)):
        return report.flag == 0, falsePositive
    # só janelas neutras e negativas: qualquer resposta sem falso positivo serve
    return not falsePositive, falsePositive


def aggregate(spec: TrialSpec, reports: Sequence[TrialReport], confidence: float = 0.99) -> TrialAggregate:
    judged = mapList(reports, lambda report: judgeTrial(spec, report))
    successes = sum(1 for success, _ in judged if success)
    falsePositives = sum(1 for _, falsePositive in judged if falsePositive)
    return TrialAggregate(
        trials=len(reports),
        successCount=successes,
        falsePositiveCount=falsePositives,
        meanQueries=float(np.mean([report.queries for report in reports])),
        successInterval=wilsonInterval(successes, len(reports), confidence),
        confidence=confidence,
    )


def runTrials(
    spec: TrialSpec,
    trials: int,
    seed: RngSeed,
    workers: int = 1,
    confidence: float = 0.99,
) -> Tuple[List[TrialReport], TrialAggregate]:
    """Roda ``trials`` tentativas independentes e agrega os resultados."""

    if trials < 1:
        raise ValidationError(f"o número de tentativas deve ser positivo, recebido {trials}")

    seeds = [deriveStream(seed, index) for index in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(runTrial, [spec] * trials, seeds))
    else:
        reports = [runTrial(spec, trialSeed) for trialSeed in seeds]

    result = aggregate(spec, reports, confidence)
    logger.info(
        "%d tentativas de %s: sucesso %.3f, falsos positivos %d, consultas médias %.1f",
        result.trials, spec.kind.value, result.successRate, result.falsePositiveCount, result.meanQueries,
    )
    return reports, result


#########################
# Varredura de custo
#########################


@dataclass(frozen=True)
class GridPoint:
    n: int
    m: int
    k: int
    epsilon: Fraction

    def __post_init__(self) -> None:
        if self.m < 1:
            raise EmptyPattern(f"m deve ser positivo, recebido {self.m}")
        if self.m > self.n:
            raise PatternLongerThanText(f"m = {self.m} é maior que n = {self.n}")
        if self.k < 1:
            raise NonPositiveK(f"k deve ser inteiro positivo, recebido {self.k}")
        if not (0 < self.epsilon <= 1):
            raise EpsilonOutOfRange(f"ε deve estar em (0, 1], recebido {self.epsilon}")

    @property
    def scale(self) -> float:
        """``ε⁻¹√(mn/k)``, a ordem de grandeza esperada do custo."""

        return math.sqrt(self.m * self.n / self.k) / float(self.epsilon)


@dataclass(frozen=True)
class BenchRow:
    point: GridPoint
    trials: int
    successRate: float
    falsePositiveRate: float
    meanQueries: float

    @property
    def normalizedQueries(self) -> float:
        return self.meanQueries / self.point.scale

    def asRow(self) -> List[Any]:
        return [
            self.point.n, self.point.m, self.point.k, str(self.point.epsilon), self.trials,
            self.successRate, self.falsePositiveRate, self.meanQueries, self.normalizedQueries,
        ]


_GRID_KEYS = {"n": "n", "m": "m", "k": "k", "eps": "epsilon", "epsilon": "epsilon"}


def parseGrid(text: str) -> List[GridPoint]:
    """Lê ``"n=1024;m=256;k=4,16,64;eps=1"`` e devolve o produto cartesiano."""

    values: Dict[str, List[Any]] = {}
    for item in filter(None, (part.strip() for part in text.split(";"))):
        name, _, raw = item.partition("=")
        key = _GRID_KEYS.get(name.strip())
        if key is None or not raw:
            raise ValidationError(f"item de grade inválido: {item!r}")
        try:
            parse = toFraction if key == "epsilon" else int
            values[key] = [parse(value.strip()) for value in raw.split(",")]
        except (ValueError, ZeroDivisionError) as error:
            raise ValidationError(f"valor inválido em {item!r}") from error

    missing = {"n", "m", "k", "epsilon"} - set(values)
    if missing:
        raise ValidationError(f"grade sem {', '.join(sorted(missing))}")

    return [
        GridPoint(n, m, k, epsilon)
        for n, m, k, epsilon in itertools.product(values["n"], values["m"], values["k"], values["epsilon"])
    ]


def benchSweep(
    grid: Sequence[GridPoint],
    trials: int,
    backend: BackendHandle,
    seed: RngSeed,
    settings: Optional[Settings] = None,
    workers: int = 1,
) -> List[BenchRow]:
    """Uma linha por ponto da grade, com uma janela plantada a distância ``k``."""

    settings = Settings() if settings is None else settings
    rows = []

    for index, point in enumerate(grid):
        pointSeed = deriveStream(seed, index)
        position = int(deriveStream(pointSeed, 0).generator().integers(0, point.n - point.m + 1))
        planted = generateInstance(
            point.n, point.m, point.k, point.epsilon,
            PlantSpec(PlantKind.MATCH_AT_DISTANCE, min(point.k, point.m), position),
            pointSeed,
        )
        if isinstance(planted, InfeasiblePlant):
            raise ValidationError(f"ponto {point} inviável: {planted.reason}")

        spec = TrialSpec(TrialKind.MATCH, planted.instance, backend, settings)
        _, result = runTrials(spec, trials, deriveStream(pointSeed, 1), workers, settings.trials.confidence)
        row = BenchRow(point, trials, result.successRate, result.falsePositiveRate, result.meanQueries)
        logger.info("Grade %s: consultas médias %.1f, normalizado %.3f", point, row.meanQueries, row.normalizedQueries)
        rows.append(row)

    return rows


def writeBenchCsv(rows: Sequence[BenchRow], out: Path) -> None:
    with open(out, "w", newline="") as csvFile:
        writer = csv.writer(csvFile)
        writer.writerow(BENCH_COLUMNS)
        for row in rows:
            writer.writerow(row.asRow())
