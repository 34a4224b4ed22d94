"""Vetor de estado denso e as reflexões de fase usadas na amplificação.

O estado é guardado como um tensor com um eixo por registrador (índice,
flag, fase), de modo que cada operador atua ao longo de um eixo sem
precisar reordenar qubits.
"""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from dataclasses import dataclass, field, replace

from ..common import Label, Predicate, QueryCounter, StateTooLarge, UnknownRegister

logger = logging.getLogger(__name__)

DEFAULT_QUBIT_CAP = 24
NORM_TOLERANCE = 1e-9

# Um predicado pode ser uma função sobre rótulos ou uma máscara booleana já pronta
Marking = Union[Predicate, np.ndarray]


@dataclass(frozen=True)
class Register:
    name: str
    qubits: int

    @property
    def dimension(self) -> int:
        return 1 << self.qubits


@dataclass(frozen=True)
class QState:
    """Estado puro sobre os registradores de ``layout``.

    ``tensor`` tem formato ``(2^q₁, 2^q₂, ...)``, um eixo por registrador, e
    a amostragem devolve um rótulo com o valor medido de cada registrador.
    """

    layout: Tuple[Register, ...]
    tensor: np.ndarray = field(repr=False)
    qubitCap: int = DEFAULT_QUBIT_CAP

    def __post_init__(self) -> None:
        checkQubits(self.layout, self.qubitCap)
        expected = tuple(register.dimension for register in self.layout)
        if self.tensor.shape != expected:
            raise ValueError(f"tensor com formato {self.tensor.shape}, esperado {expected}")

    @classmethod
    def zero(cls, layout: Sequence[Register], qubitCap: int = DEFAULT_QUBIT_CAP) -> "QState":
        """Estado ``|0…0⟩`` sobre ``layout``."""

        layout = tuple(layout)
        checkQubits(layout, qubitCap)
        tensor = np.zeros(tuple(register.dimension for register in layout), dtype=complex)
        tensor[(0,) * len(layout)] = 1.0
        return cls(layout, tensor, qubitCap)

    @property
    def qubits(self) -> int:
        return sum(register.qubits for register in self.layout)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.tensor.shape

    @property
    def amplitudes(self) -> np.ndarray:
        return self.tensor.reshape(-1)

    def axis(self, name: str) -> int:
        for index, register in enumerate(self.layout):
            if register.name == name:
                return index
        raise UnknownRegister(name)

    def withTensor(self, tensor: np.ndarray) -> "QState":
        return replace(self, tensor=tensor)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.tensor) ** 2))

    def probabilities(self, registers: Optional[Sequence[str]] = None) -> np.ndarray:
        """Distribuição de medida, marginalizada nos registradores pedidos."""

        joint = np.abs(self.tensor) ** 2
        if registers is None:
            return joint

        keep = [self.axis(name) for name in registers]
        dropped = tuple(axis for axis in range(len(self.layout)) if axis not in keep)
        marginal = joint.sum(axis=dropped)
        # a soma preserva a ordem do layout; reordena para a ordem pedida
        order = np.argsort(np.argsort(keep))
        return np.transpose(marginal, order) if len(keep) > 1 else marginal

    def measure(self, rng: np.random.Generator) -> Label:
        weights = self.probabilities().reshape(-1)
        outcome = rng.choice(len(weights), p=weights / weights.sum())
        return tuple(int(value) for value in np.unravel_index(outcome, self.shape))


def checkQubits(layout: Sequence[Register], qubitCap: int) -> None:
    qubits = sum(register.qubits for register in layout)
    if qubits > qubitCap:
        logger.warning("Estado com %d qubits excede o limite de %d", qubits, qubitCap)
        raise StateTooLarge(f"{qubits} qubits excedem o limite configurado de {qubitCap}")


def predicateMask(shape: Tuple[int, ...], chi: Marking) -> np.ndarray:
    """Máscara booleana ``χ(rótulo)`` sobre todos os rótulos de ``shape``."""

    if isinstance(chi, np.ndarray):
        if chi.shape != shape:
            raise ValueError(f"máscara com formato {chi.shape}, esperado {shape}")
        return chi.astype(bool)

    mask = np.zeros(shape, dtype=bool)
    for label in np.ndindex(*shape):
        mask[label] = bool(chi(tuple(int(value) for value in label)))
    return mask


def isMarked(chi: Marking, label: Label) -> bool:
    if isinstance(chi, np.ndarray):
        return bool(chi[label])
    return bool(chi(label))


def applyPhaseFlipZero(state: QState, registers: Union[None, str, Sequence[str]] = None) -> QState:
    """``S₀``: nega a amplitude dos estados em que ``registers`` valem todos zero.

    Sem ``registers``, a reflexão é sobre o estado ``|0…0⟩`` inteiro.
    """

    if registers is None:
        names = [register.name for register in state.layout]
    elif isinstance(registers, str):
        names = [registers]
    else:
        names = list(registers)

    index = [slice(None)] * len(state.layout)
    for name in names:
        index[state.axis(name)] = 0

    tensor = state.tensor.copy()
    tensor[tuple(index)] *= -1
    return state.withTensor(tensor)


def applyPredicatePhase(state: QState, chi: Marking, counter: Optional[QueryCounter] = None) -> QState:
    """``S_χ``: multiplica cada amplitude por ``(−1)^χ(rótulo)``; custa uma rodada de oráculo."""

    mask = predicateMask(state.shape, chi)
    if counter is not None:
        counter.add(1)
    return state.withTensor(np.where(mask, -state.tensor, state.tensor))
