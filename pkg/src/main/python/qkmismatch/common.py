"""Tipos e utilitários compartilhados por todo o pacote ``qkmismatch``.

Aqui ficam a instância do problema (texto, padrão, ``k`` e ``ε``), as
sementes determinísticas usadas por todas as rotinas aleatórias, o contador
de consultas ao oráculo e a hierarquia de erros. Também reúne pequenos
auxiliares numéricos, como o cálculo da menor potência de dois.
"""

import math
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Iterable, List, Tuple, TypeVar, Union

from dataclasses import dataclass, field
import numpy as np

# Types
Numeric = Union[float, int]
EpsilonLike = Union[Fraction, Decimal, float, int, str]
ByteString = Union[bytes, bytearray, memoryview]
Label = Tuple[int, ...]
Predicate = Callable[[Label], bool]

A = TypeVar("A")
B = TypeVar("B")

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Failure:
    """Representa uma falha esperada retornada por funções do pacote."""

    # Texto descritivo do motivo da falha
    reason: str


#########################
# Erros
#########################


class KMismatchError(Exception):
    """Base de todos os erros levantados pelo pacote."""


class ValidationError(KMismatchError, ValueError):
    """Entrada rejeitada; nenhum valor é ajustado silenciosamente."""


class EmptyPattern(ValidationError):
    pass


class PatternLongerThanText(ValidationError):
    pass


class NonPositiveK(ValidationError):
    pass


class EpsilonOutOfRange(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class SettingsError(ValidationError):
    pass


class UnknownRegister(KMismatchError, KeyError):
    pass


class StateTooLarge(KMismatchError, MemoryError):
    pass


#########################
# Auxiliares
#########################


def mapList(elements: Iterable[A], func: Callable[[A], B]) -> List[B]:
    """Aplica ``func`` a cada item e retorna o resultado como ``list``."""

    return list(map(func, elements))


def isPowerOfTwo(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


def nextPowerOfTwo(value: int) -> int:
    """Menor potência de dois maior ou igual a ``value`` (``1`` para ``value <= 1``)."""

    if value <= 1:
        return 1
    return 1 << (int(value) - 1).bit_length()


def log2Exact(value: int) -> int:
    """Expoente de uma potência de dois; rejeita outros valores."""

    if not isPowerOfTwo(value):
        raise ValueError(f"{value} não é potência de dois")
    return value.bit_length() - 1


def toFraction(value: EpsilonLike) -> Fraction:
    """Converte ``value`` para ``Fraction`` preservando a escrita decimal.

    ``0.1`` vira exatamente ``1/10`` (e não a expansão binária do ``float``),
    o que mantém as comparações com ``(1+ε)k`` exatas.
    """

    if isinstance(value, bool):
        raise TypeError("valor booleano não é um ε válido")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"ε não finito: {value}")
        return Fraction(repr(value))
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    return Fraction(str(value).strip())


#########################
# Instância do problema
#########################


@dataclass(frozen=True)
class MatchInstance:
    """Texto ``T`` (tamanho ``n``), padrão ``P`` (tamanho ``m``), limiar ``k`` e ``ε``."""

    text: bytes
    pattern: bytes
    k: int
    epsilon: Fraction

    @property
    def n(self) -> int:
        return len(self.text)

    @property
    def m(self) -> int:
        return len(self.pattern)

    @property
    def lastPosition(self) -> int:
        """Última posição válida de janela, ``n - m``."""

        return self.n - self.m

    @property
    def searchSize(self) -> int:
        """Tamanho ``N`` do espaço de busca: potência de dois ``>= n - m + 1``.

        O expoente mínimo é 1, já que a busca fraca exige ``N >= 2``.
        """

        return max(2, nextPowerOfTwo(self.lastPosition + 1))

    @property
    def acceptanceLimit(self) -> Fraction:
        """Limite relaxado ``(1 + ε)k`` em aritmética racional."""

        return (1 + self.epsilon) * self.k

    def window(self, position: int) -> bytes:
        return self.text[position:position + self.m]


def validateInstance(
    rawText: ByteString, rawPattern: ByteString, k: int, epsilon: EpsilonLike
) -> MatchInstance:
    """Valida os parâmetros e constrói uma ``MatchInstance``.

    Levanta ``EmptyPattern``, ``PatternLongerThanText``, ``NonPositiveK`` ou
    ``EpsilonOutOfRange``; nunca corrige valores fora do domínio.
    """

    text, pattern = bytes(rawText), bytes(rawPattern)

    if len(pattern) == 0:
        raise EmptyPattern("o padrão não pode ser vazio")
    if len(pattern) > len(text):
        raise PatternLongerThanText(f"m = {len(pattern)} é maior que n = {len(text)}")
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k <= 0:
        raise NonPositiveK(f"k deve ser inteiro positivo, recebido {k!r}")

    try:
        eps = toFraction(epsilon)
    except (ValueError, TypeError, ZeroDivisionError) as error:
        raise EpsilonOutOfRange(f"ε inválido: {epsilon!r}") from error
    if not (0 < eps <= 1):
        raise EpsilonOutOfRange(f"ε deve estar em (0, 1], recebido {epsilon!r}")

    return MatchInstance(text, pattern, int(k), eps)


#########################
# Sementes e contadores
#########################


@dataclass(frozen=True)
class RngSeed:
    """Semente mestre de 64 bits mais o índice do fluxo derivado."""

    masterSeed: int
    streamIndex: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.masterSeed <= MASK64):
            raise ValidationError(f"semente mestre fora de 64 bits: {self.masterSeed}")
        if self.streamIndex < 0:
            raise ValidationError(f"índice de fluxo negativo: {self.streamIndex}")

    def sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.masterSeed, spawn_key=(self.streamIndex,))

    def generator(self) -> np.random.Generator:
        """Gerador ``PCG64`` determinado apenas por ``(masterSeed, streamIndex)``."""

        return np.random.Generator(np.random.PCG64(self.sequence()))


def deriveStream(seed: RngSeed, childIndex: int) -> RngSeed:
    """Deriva a semente do fluxo filho ``childIndex`` (função pura).

    A tentativa ``i`` de um experimento usa sempre o filho ``i``, de modo que
    a ordem de execução (ou o paralelismo) não altera resultados.
    """

    if childIndex < 0:
        raise ValueError(f"índice filho negativo: {childIndex}")

    sequence = np.random.SeedSequence(seed.masterSeed, spawn_key=(seed.streamIndex, childIndex))
    derivedIndex = int(sequence.generate_state(1, dtype=np.uint64)[0])
    return RngSeed(seed.masterSeed, derivedIndex)


@dataclass
class QueryCounter:
    """Acumulador de rodadas de oráculo de uma execução.

    Cada leitura de símbolo dentro de uma sub-rotina quântica conta 1; uma
    potência de Grover com ``2^p`` iterações conta ``2^p`` rodadas.
    """

    oracleQueries: int = 0

    def add(self, rounds: int) -> None:
        if rounds < 0:
            raise ValueError("o contador de consultas não pode diminuir")
        self.oracleQueries += int(rounds)

    def snapshot(self) -> int:
        return self.oracleQueries

    def reset(self) -> None:
        self.oracleQueries = 0


@dataclass(frozen=True)
class CountEstimate:
    """Estimativa ``t'`` do número de itens marcados e consultas gastas nela."""

    tPrime: float
    queries: int


@dataclass(frozen=True)
class EstimateDistribution:
    """Distribuição exata de saída da contagem quântica.

    ``probabilities[y]`` é a chance de medir a fase ``y`` e ``estimates[y]`` é
    a estimativa ``N·sin²(πy/M)`` correspondente.
    """

    size: int
    rounds: int
    estimates: np.ndarray = field(repr=False)
    probabilities: np.ndarray = field(repr=False)

    def sample(self, rng: np.random.Generator) -> float:
        weights = self.probabilities / self.probabilities.sum()
        outcome = rng.choice(len(weights), p=weights)
        return float(self.estimates[outcome])

    def probabilityWhere(self, condition: np.ndarray) -> float:
        return float(self.probabilities[condition].sum())

    def totalVariation(self, other: "EstimateDistribution") -> float:
        if self.probabilities.shape != other.probabilities.shape:
            raise ValueError("distribuições com número diferente de fases")
        return float(0.5 * np.abs(self.probabilities - other.probabilities).sum())
