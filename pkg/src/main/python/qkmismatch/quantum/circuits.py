"""Circuitos de preparação ``A`` aceitos pelas rotinas de amplificação."""

from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np
import scipy.linalg

from ..common import Label, log2Exact
from .state import DEFAULT_QUBIT_CAP, QState, Register

INDEX = "index"
FLAG = "flag"


def _applyAlong(tensor: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    """Aplica ``matrix`` ao eixo ``axis`` do tensor de amplitudes."""

    return np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)


_H2 = scipy.linalg.hadamard(2) / np.sqrt(2.0)


def _hadamardLayer(tensor: np.ndarray, axis: int, qubits: int) -> np.ndarray:
    """Aplica ``H⊗n`` ao eixo ``axis``, um qubit por vez, em ``O(N log N)``."""

    moved = np.moveaxis(tensor, axis, 0)
    rest = moved.shape[1:]
    split = moved.reshape((2,) * qubits + rest)
    for qubit in range(qubits):
        split = _applyAlong(split, _H2, qubit)
    return np.moveaxis(split.reshape((1 << qubits,) + rest), 0, axis)


class PreparableCircuit(ABC):
    """Unitário opaco ``A`` com ação direta, inversa e distribuição de ``A|0⟩``."""

    @property
    @abstractmethod
    def layout(self) -> Tuple[Register, ...]:
        ...

    @abstractmethod
    def apply(self, state: QState) -> QState:
        ...

    @abstractmethod
    def applyInverse(self, state: QState) -> QState:
        ...

    @abstractmethod
    def labelProbabilities(self) -> np.ndarray:
        """Distribuição exata da medida de ``A|0⟩`` (formato ``labelShape``)."""

    @property
    def labelShape(self) -> Tuple[int, ...]:
        return tuple(register.dimension for register in self.layout)

    def prepare(self, qubitCap: int = DEFAULT_QUBIT_CAP) -> QState:
        return self.apply(QState.zero(self.layout, qubitCap))

    def sample(self, rng: np.random.Generator) -> Label:
        """Mede ``A|0⟩`` uma vez."""

        weights = self.labelProbabilities().reshape(-1)
        outcome = rng.choice(len(weights), p=weights / weights.sum())
        return tuple(int(value) for value in np.unravel_index(outcome, self.labelShape))


class UniformSearchCircuit(PreparableCircuit):
    """Camada de Hadamard sobre um registrador de índice com ``N = 2^n`` posições."""

    def __init__(self, size: int) -> None:
        self.size = size
        self._register = Register(INDEX, log2Exact(size))

    @property
    def layout(self) -> Tuple[Register, ...]:
        return (self._register,)

    def apply(self, state: QState) -> QState:
        return state.withTensor(_hadamardLayer(state.tensor, state.axis(INDEX), self._register.qubits))

    def applyInverse(self, state: QState) -> QState:
        # H⊗n é a sua própria inversa
        return self.apply(state)

    def labelProbabilities(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)


class FlaggedIndexCircuit(PreparableCircuit):
    """Índice uniforme seguido de uma rotação da flag controlada pelo índice.

    Depois de ``A|0, 0⟩`` a flag vale 1 no índice ``j`` com probabilidade
    ``acceptance[j]``; é a forma coerente de "sortear ``j`` e rodar o
    decisor sobre ``j``".
    """

    def __init__(self, acceptance: np.ndarray) -> None:
        acceptance = np.clip(np.asarray(acceptance, dtype=float), 0.0, 1.0)
        self.size = len(acceptance)
        self.acceptance = acceptance
        self._index = UniformSearchCircuit(self.size)
        self._cos = np.sqrt(1.0 - acceptance)
        self._sin = np.sqrt(acceptance)

    @property
    def layout(self) -> Tuple[Register, ...]:
        return (Register(INDEX, log2Exact(self.size)), Register(FLAG, 1))

    def _rotate(self, state: QState, sign: float) -> QState:
        tensor = np.moveaxis(state.tensor, (state.axis(INDEX), state.axis(FLAG)), (0, 1))
        low, high = tensor[:, 0], tensor[:, 1]
        cos = self._cos.reshape((-1,) + (1,) * (low.ndim - 1))
        sin = sign * self._sin.reshape((-1,) + (1,) * (low.ndim - 1))
        rotated = np.stack([cos * low - sin * high, sin * low + cos * high], axis=1)
        return state.withTensor(np.moveaxis(rotated, (0, 1), (state.axis(INDEX), state.axis(FLAG))))

    def apply(self, state: QState) -> QState:
        return self._rotate(self._index.apply(state), +1.0)

    def applyInverse(self, state: QState) -> QState:
        return self._index.applyInverse(self._rotate(state, -1.0))

    def labelProbabilities(self) -> np.ndarray:
        return np.stack([1.0 - self.acceptance, self.acceptance], axis=1) / self.size
