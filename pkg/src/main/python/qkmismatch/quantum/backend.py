"""Seleção entre o backend exato (vetor de estado) e o analítico.

Os dois tipos expõem as mesmas operações com a mesma assinatura; o método é
escolhido por um ``Enum``, como nas rotinas de digitalização.
"""

import logging
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from dataclasses import dataclass

from ..common import CountEstimate, EstimateDistribution, Label, QueryCounter, RngSeed, SettingsError, nextPowerOfTwo
from ..settings import BackendSettings
from . import analytic, statevector
from .circuits import PreparableCircuit
from .state import DEFAULT_QUBIT_CAP, Marking

logger = logging.getLogger(__name__)


class BackendKind(Enum):
    EXACT = "exact"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class BackendHandle:
    """Backend escolhido, limite de qubits e (opcionalmente) a semente de origem."""

    kind: BackendKind = BackendKind.ANALYTIC
    qubitCap: int = DEFAULT_QUBIT_CAP
    seed: Optional[RngSeed] = None

    @classmethod
    def fromSettings(cls, settings: BackendSettings, seed: Optional[RngSeed] = None) -> "BackendHandle":
        try:
            kind = BackendKind(settings.kind)
        except ValueError as error:
            raise SettingsError(f"backend desconhecido: {settings.kind!r}") from error
        logger.debug("Backend %s com limite de %d qubits", kind.value, settings.qubitCap)
        return cls(kind, settings.qubitCap, seed)

    def generator(self) -> np.random.Generator:
        if self.seed is None:
            raise ValueError("backend sem semente associada")
        return self.seed.generator()

    def countingRounds(self, rounds: int) -> int:
        """Rodadas efetivamente cobradas pela contagem com parâmetro ``M``.

        O vetor de estado arredonda ``M`` para a próxima potência de dois.
        """

        if self.kind is BackendKind.EXACT:
            return nextPowerOfTwo(rounds)
        return rounds

    def groverSample(
        self,
        circuit: PreparableCircuit,
        chi: Marking,
        iterations: int,
        rng: np.random.Generator,
        counter: Optional[QueryCounter] = None,
    ) -> Tuple[Label, bool]:
        """Mede ``Q(A, χ)^j A|0⟩``; cobra ``j`` rodadas de ``χ``."""

        if self.kind is BackendKind.EXACT:
            return statevector.groverPower(circuit, chi, iterations, rng, counter, self.qubitCap)
        elif self.kind is BackendKind.ANALYTIC:
            return analytic.sampleAmplified(circuit, chi, iterations, rng, counter)
        else:
            raise ValueError(f"Unrecognized backend '{self.kind}' in `groverSample`")

    def countDistribution(self, size: int, marked: int, rounds: int) -> EstimateDistribution:
        if self.kind is BackendKind.EXACT:
            return statevector.amplitudeEstimationDistribution(
                size, marked, self.countingRounds(rounds), self.qubitCap
            )
        elif self.kind is BackendKind.ANALYTIC:
            return analytic.amplitudeEstimationDistribution(size, marked, rounds)
        else:
            raise ValueError(f"Unrecognized backend '{self.kind}' in `countDistribution`")

    def countSample(
        self,
        chi: np.ndarray,
        rounds: int,
        rng: np.random.Generator,
        counter: Optional[QueryCounter] = None,
    ) -> CountEstimate:
        """Uma estimativa ``t'`` do número de posições marcadas em ``chi``."""

        if self.kind is BackendKind.EXACT:
            return statevector.sampleAmplitudeEstimate(
                chi, self.countingRounds(rounds), rng, counter, self.qubitCap
            )
        elif self.kind is BackendKind.ANALYTIC:
            marked = int(np.count_nonzero(chi))
            return analytic.analyticCountSample(len(chi), marked, rounds, rng, counter)
        else:
            raise ValueError(f"Unrecognized backend '{self.kind}' in `countSample`")
