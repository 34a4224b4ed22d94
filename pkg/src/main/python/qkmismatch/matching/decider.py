"""Decisor aproximado de distância de Hamming (``k`` contra ``(1+ε)k``).

Conta, por estimativa de amplitude, as posições em que ``X`` e ``Y`` diferem
e aceita quando a estimativa ``t'`` fica abaixo de ``(1 + ε/2)k``.
"""

import logging
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

import numpy as np
from dataclasses import dataclass

from ..common import (
    ByteString,
    EmptyPattern,
    EpsilonLike,
    EpsilonOutOfRange,
    LengthMismatch,
    NonPositiveK,
    QueryCounter,
    nextPowerOfTwo,
    toFraction,
)
from ..quantum.backend import BackendHandle

logger = logging.getLogger(__name__)

COUNT_CONFIDENCE = 6

_PI = Decimal(
    "3.14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
)
_PRECISIONS = (40, 80)


def _epsilon(epsilon: EpsilonLike) -> Fraction:
    try:
        eps = toFraction(epsilon)
    except (ValueError, TypeError, ZeroDivisionError) as error:
        raise EpsilonOutOfRange(f"ε inválido: {epsilon!r}") from error
    if not (0 < eps <= 1):
        raise EpsilonOutOfRange(f"ε deve estar em (0, 1], recebido {epsilon!r}")
    return eps


def computeBeta(epsilon: EpsilonLike) -> float:
    """``β = √(1 + 3ε/2) − √(1 + ε)``.

    Calculado como ``(ε/2) / (√(1 + 3ε/2) + √(1 + ε))``, que é a mesma
    quantidade sem o cancelamento da subtração.
    """

    eps = float(_epsilon(epsilon))
    return (eps / 2) / (math.sqrt(1 + 1.5 * eps) + math.sqrt(1 + eps))


def computeAlpha(epsilon: EpsilonLike, confidence: int = COUNT_CONFIDENCE) -> float:
    return confidence * math.pi / computeBeta(epsilon)


def _decimalM(size: int, k: int, eps: Fraction, confidence: int) -> Decimal:
    epsDecimal = Decimal(eps.numerator) / Decimal(eps.denominator)
    beta = (epsDecimal / 2) / ((1 + Decimal("1.5") * epsDecimal).sqrt() + (1 + epsDecimal).sqrt())
    return confidence * _PI / beta * (Decimal(size) / Decimal(k)).sqrt()


def computeM(size: int, k: int, epsilon: EpsilonLike, confidence: int = COUNT_CONFIDENCE) -> int:
    """``M = ⌈α√(N/k)⌉`` com teto exato.

    O valor é avaliado em precisão decimal crescente até que o intervalo de
    erro não contenha um inteiro.
    """

    if k < 1:
        raise NonPositiveK(f"k deve ser positivo, recebido {k}")
    eps = _epsilon(epsilon)

    for precision in _PRECISIONS:
        with localcontext() as context:
            context.prec = precision
            value = _decimalM(size, k, eps, confidence)
            slack = abs(value) * Decimal(10) ** (10 - precision)
            low, high = math.ceil(value - slack), math.ceil(value + slack)
        if low == high:
            return int(low)
        logger.warning("Teto de M ambíguo com %d dígitos (%s); aumentando a precisão", precision, value)

    raise ArithmeticError(f"não foi possível determinar ⌈α√(N/k)⌉ para N={size}, k={k}, ε={eps}")


@dataclass(frozen=True)
class DeciderParams:
    """Parâmetros derivados de ``(m, k, ε)`` para uma execução do decisor."""

    m: int
    k: int
    epsilon: Fraction
    size: int  # N, menor potência de dois >= m
    beta: float
    alpha: float
    M: int
    threshold: Fraction  # (1 + ε/2)k

    def accepts(self, tPrime: float) -> bool:
        return tPrime < float(self.threshold)


def deriveDeciderParams(m: int, k: int, epsilon: EpsilonLike, confidence: int = COUNT_CONFIDENCE) -> DeciderParams:
    eps = _epsilon(epsilon)
    size = nextPowerOfTwo(m)
    params = DeciderParams(
        m=m,
        k=k,
        epsilon=eps,
        size=size,
        beta=computeBeta(eps),
        alpha=computeAlpha(eps, confidence),
        M=computeM(size, k, eps, confidence),
        threshold=(1 + eps / 2) * k,
    )
    logger.debug("Decisor: m=%d, k=%d, ε=%s, N=%d, M=%d", m, k, eps, size, params.M)
    return params


def mismatchMask(x: ByteString, y: ByteString, size: int) -> np.ndarray:
    """``F(j) = (j < m ∧ X_j ≠ Y_j)`` sobre ``[0..N)``; o preenchimento vale 0."""

    left = np.frombuffer(bytes(x), dtype=np.uint8)
    right = np.frombuffer(bytes(y), dtype=np.uint8)
    mask = np.zeros(size, dtype=bool)
    mask[:len(left)] = left != right
    return mask


def _validate(x: ByteString, y: ByteString, k: int) -> None:
    if len(x) != len(y):
        raise LengthMismatch(f"|X| = {len(x)} e |Y| = {len(y)} diferem")
    if len(x) == 0:
        raise EmptyPattern("as cadeias comparadas não podem ser vazias")
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise NonPositiveK(f"k deve ser inteiro positivo, recebido {k!r}")


def approxBoundedHammingDecider(
    x: ByteString,
    y: ByteString,
    k: int,
    epsilon: EpsilonLike,
    backend: BackendHandle,
    rng: np.random.Generator,
    counter: Optional[QueryCounter] = None,
    confidence: int = COUNT_CONFIDENCE,
) -> int:
    """1 (SIM) se a contagem estimada de diferenças fica abaixo de ``(1 + ε/2)k``.

    Se ``δ_H(X, Y) <= k`` responde 1 com probabilidade pelo menos 9/10; se
    ``δ_H(X, Y) > (1+ε)k`` responde 0 com a mesma probabilidade.
    """

    _validate(x, y, k)
    eps = _epsilon(epsilon)
    if k >= len(x):
        return 1

    params = deriveDeciderParams(len(x), k, eps, confidence)
    estimate = backend.countSample(mismatchMask(x, y, params.size), params.M, rng, counter)
    return int(params.accepts(estimate.tPrime))


def deciderAcceptance(mismatches: int, params: DeciderParams, backend: BackendHandle) -> float:
    """Probabilidade exata de o decisor responder 1 quando ``δ_H = mismatches``."""

    if params.k >= params.m:
        return 1.0
    distribution = backend.countDistribution(params.size, mismatches, params.M)
    return distribution.probabilityWhere(distribution.estimates < float(params.threshold))


def gapSoundness(t: int, k: int, epsilon: EpsilonLike) -> bool:
    """Confere as duas cadeias de desigualdades no pior ``t'`` admissível.

    Com ``|t' − t| <= 2β√(kt) + β²k``: ``t <= k`` implica ``t' < (1+ε/2)k`` e
    ``t > (1+ε)k`` implica ``t' >= (1+ε/2)k``. Posições neutras não têm
    exigência.
    """

    eps = _epsilon(epsilon)
    beta = computeBeta(eps)
    error = 2 * beta * math.sqrt(k * t) + beta ** 2 * k
    threshold = float((1 + eps / 2) * k)

    if t <= k:
        return t + error < threshold
    if t > (1 + eps) * k:
        return t - error >= threshold
    return True


def deciderQueryBound(m: int, k: int, epsilon: EpsilonLike, confidence: int = COUNT_CONFIDENCE) -> float:
    """``1 + 6√2·π·√(m/k)/β``, limite para ``M`` que dá o custo ``Õ(ε⁻¹√(m/k))``."""

    return 1 + confidence * math.sqrt(2) * math.pi * math.sqrt(m / k) / computeBeta(epsilon)
