"""Oráculos clássicos de referência (força bruta).

Toda resposta das rotinas quânticas simuladas é julgada contra estas funções:
distância de Hamming, distâncias de todas as janelas, a classificação
tricotômica das posições e o limite de erro da contagem quântica.
"""

import math
from enum import IntEnum
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .common import ByteString, MatchInstance, Numeric

INFINITY = math.inf


class TrichotomyLabel(IntEnum):
    """Rótulo ``F(j)`` de cada posição do espaço de busca."""

    NEGATIVE = 0
    POSITIVE = 1
    NEUTRAL = 2


def _asArray(data: ByteString) -> np.ndarray:
    return np.frombuffer(bytes(data), dtype=np.uint8)


def hammingDistance(a: ByteString, b: ByteString) -> Union[int, float]:
    """Número de posições diferentes; ``INFINITY`` se os tamanhos diferem."""

    if len(a) != len(b):
        return INFINITY
    if len(a) == 0:
        return 0
    return int(np.count_nonzero(_asArray(a) != _asArray(b)))


def windowDistances(inst: MatchInstance) -> np.ndarray:
    """Distância de Hamming de cada janela ``T[j..j+m)`` ao padrão, ``j ∈ [0..n-m]``."""

    windows = sliding_window_view(_asArray(inst.text), inst.m)
    return np.count_nonzero(windows != _asArray(inst.pattern), axis=1)


def labelForDistance(distance: Numeric, k: int, epsilon: Fraction) -> TrichotomyLabel:
    """Classifica uma distância comparando com ``k`` e ``(1+ε)k`` de forma exata."""

    if distance <= k:
        return TrichotomyLabel.POSITIVE
    if distance == INFINITY or Fraction(int(distance)) > (1 + epsilon) * k:
        return TrichotomyLabel.NEGATIVE
    return TrichotomyLabel.NEUTRAL


def classifyPosition(inst: MatchInstance, j: int, N: int) -> TrichotomyLabel:
    """Valor de ``F(j)`` calculado com a distância exata."""

    assert 0 <= j < N, f"posição {j} fora de [0..{N})"

    if j > inst.lastPosition:
        return TrichotomyLabel.NEGATIVE
    return labelForDistance(hammingDistance(inst.window(j), inst.pattern), inst.k, inst.epsilon)


def trichotomy(inst: MatchInstance, N: Optional[int] = None) -> np.ndarray:
    """Vetor com ``F(j)`` para todo ``j ∈ [0..N)`` (padrão: ``inst.searchSize``)."""

    N = inst.searchSize if N is None else N
    labels = np.full(N, int(TrichotomyLabel.NEGATIVE), dtype=np.int8)

    distances = windowDistances(inst)
    limit = inst.acceptanceLimit
    # d > (1+ε)k  <=>  d·den > num·k, sem arredondamento
    negative = distances * limit.denominator > limit.numerator
    inRange = np.where(distances <= inst.k, int(TrichotomyLabel.POSITIVE),
                       np.where(negative, int(TrichotomyLabel.NEGATIVE), int(TrichotomyLabel.NEUTRAL)))
    count = min(N, len(inRange))
    labels[:count] = inRange[:count]
    return labels


def bruteForceKMismatch(inst: MatchInstance) -> Optional[int]:
    """Menor ``j`` com ``δ_H(T[j..j+m), P) <= k``, ou ``None``."""

    hits = np.flatnonzero(windowDistances(inst) <= inst.k)
    return int(hits[0]) if len(hits) > 0 else None


def countingErrorBound(N: int, t: int, M: int, kConf: Numeric) -> float:
    """Limite ``2πk√(t(N−t))/M + π²k²N/M²`` da contagem quântica."""

    assert 0 <= t <= N and M >= 1

    return (
        2 * math.pi * kConf * math.sqrt(t * (N - t)) / M
        + (math.pi ** 2) * (kConf ** 2) * N / (M ** 2)
    )
