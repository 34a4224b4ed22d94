"""Geração de instâncias com estrutura plantada e os arquivos de instância.

Uma instância gravada em ``<saída>`` ocupa três arquivos: ``<saída>.text`` e
``<saída>.pattern`` com os bytes crus e ``<saída>.json`` com os parâmetros.
"""

import json
import logging
import re
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from dataclasses import dataclass

from ..common import EpsilonLike, Failure, MatchInstance, RngSeed, ValidationError, validateInstance
from ..reference import windowDistances

logger = logging.getLogger(__name__)

MAX_REJECTIONS = 64


class PlantKind(Enum):
    MATCH_AT_DISTANCE = "match-at-distance"
    NONE_WITHIN_DISTANCE = "none-above-distance"


@dataclass(frozen=True)
class PlantSpec:
    """Estrutura plantada.

    ``match-at-distance-d@j`` copia o padrão na janela ``j`` com exatamente
    ``d`` posições alteradas; ``none-above-distance-d`` exige que toda janela
    esteja a distância maior que ``d``.
    """

    kind: PlantKind
    distance: int
    position: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is PlantKind.MATCH_AT_DISTANCE:
            return f"{self.kind.value}-{self.distance}@{self.position}"
        return f"{self.kind.value}-{self.distance}"


_PLANT_PATTERN = re.compile(r"^(match-at-distance|none-above-distance)-(\d+)(?:@(\d+))?$")


def parsePlant(text: str) -> PlantSpec:
    match = _PLANT_PATTERN.match(text.strip())
    if match is None:
        raise ValidationError(f"plantio inválido: {text!r}")

    kind = PlantKind(match.group(1))
    distance = int(match.group(2))
    position = None if match.group(3) is None else int(match.group(3))

    if kind is PlantKind.MATCH_AT_DISTANCE and position is None:
        raise ValidationError(f"'{text}' precisa de uma posição (@j)")
    if kind is PlantKind.NONE_WITHIN_DISTANCE and position is not None:
        raise ValidationError(f"'{text}' não aceita posição")
    return PlantSpec(kind, distance, position)


@dataclass(frozen=True)
class InfeasiblePlant(Failure):
    pass


@dataclass(frozen=True)
class PlantedInstance:
    """Instância gerada e a menor distância de janela verificada exaustivamente."""

    instance: MatchInstance
    plant: PlantSpec
    seed: RngSeed
    verifiedMinDistance: int

    def sidecar(self) -> Dict[str, Any]:
        return {
            "n": self.instance.n,
            "m": self.instance.m,
            "k": self.instance.k,
            "epsilon": str(self.instance.epsilon),
            "plant": str(self.plant),
            "seed": {"master": self.seed.masterSeed, "stream": self.seed.streamIndex},
            "verified_min_distance": self.verifiedMinDistance,
        }


def _flip(rng: np.random.Generator, symbols: np.ndarray, count: int, alphabet: int) -> np.ndarray:
    """Troca ``count`` posições sorteadas por um símbolo diferente."""

    flipped = symbols.copy()
    positions = rng.choice(len(symbols), size=count, replace=False)
    offsets = rng.integers(1, alphabet, size=count)
    flipped[positions] = (flipped[positions].astype(np.int64) + offsets) % alphabet
    return flipped


def generateInstance(
    n: int,
    m: int,
    k: int,
    epsilon: EpsilonLike,
    plant: PlantSpec,
    seed: RngSeed,
    alphabet: int = 256,
) -> Union[PlantedInstance, InfeasiblePlant]:
    """Instância aleatória com ``plant``, conferida por varredura exaustiva de ``δ_H``."""

    if not (2 <= alphabet <= 256):
        return InfeasiblePlant(f"alfabeto de {alphabet} símbolos não suportado")
    if plant.distance < 0 or plant.distance > m:
        return InfeasiblePlant(f"distância {plant.distance} fora de [0, m={m}]")

    rng = seed.generator()

    if plant.kind is PlantKind.MATCH_AT_DISTANCE:
        position = plant.position if plant.position is not None else 0
        if not (0 <= position <= n - m):
            return InfeasiblePlant(f"posição {position} fora de [0, n−m={n - m}]")

        text = rng.integers(0, alphabet, size=n).astype(np.uint8)
        pattern = rng.integers(0, alphabet, size=m).astype(np.uint8)
        text[position:position + m] = _flip(rng, pattern, plant.distance, alphabet)

        inst = validateInstance(text.tobytes(), pattern.tobytes(), k, epsilon)
        distances = windowDistances(inst)
        assert distances[position] == plant.distance, "janela plantada com distância errada"

        if distances.min() < plant.distance:
            logger.info("Colisão aleatória: distância mínima %d < %d plantada", distances.min(), plant.distance)
        return PlantedInstance(inst, plant, seed, int(distances.min()))

    if plant.distance >= m:
        return InfeasiblePlant(f"nenhuma janela pode ter distância maior que m={m}")

    for attempt in range(MAX_REJECTIONS):
        text = rng.integers(0, alphabet, size=n).astype(np.uint8)
        pattern = rng.integers(0, alphabet, size=m).astype(np.uint8)
        inst = validateInstance(text.tobytes(), pattern.tobytes(), k, epsilon)
        minimum = int(windowDistances(inst).min())
        if minimum > plant.distance:
            return PlantedInstance(inst, plant, seed, minimum)
        logger.debug("Tentativa %d rejeitada: distância mínima %d", attempt + 1, minimum)

    return InfeasiblePlant(f"nenhuma instância com todas as janelas acima de {plant.distance} em {MAX_REJECTIONS} tentativas")


def saveInstanceFiles(planted: PlantedInstance, out: Path) -> None:
    out = Path(out)
    Path(f"{out}.text").write_bytes(planted.instance.text)
    Path(f"{out}.pattern").write_bytes(planted.instance.pattern)
    with open(f"{out}.json", "w") as sidecarFile:
        json.dump(planted.sidecar(), sidecarFile, indent=2, sort_keys=True)


def loadInstanceFiles(out: Path) -> PlantedInstance:
    """Lê os três arquivos gravados por ``saveInstanceFiles``."""

    out = Path(out)
    try:
        with open(f"{out}.json", "r") as sidecarFile:
            sidecar = json.load(sidecarFile)
        text = Path(f"{out}.text").read_bytes()
        pattern = Path(f"{out}.pattern").read_bytes()
    except (OSError, json.JSONDecodeError) as error:
        raise ValidationError(f"não foi possível ler a instância {out}: {error}") from error

    inst = validateInstance(text, pattern, sidecar["k"], Fraction(sidecar["epsilon"]))
    if (inst.n, inst.m) != (sidecar["n"], sidecar["m"]):
        raise ValidationError(f"tamanhos de {out} não conferem com o arquivo JSON")

    seed = RngSeed(sidecar["seed"]["master"], sidecar["seed"]["stream"])
    return PlantedInstance(inst, parsePlant(sidecar["plant"]), seed, sidecar["verified_min_distance"])
