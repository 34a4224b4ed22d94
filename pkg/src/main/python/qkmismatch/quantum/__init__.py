"""Backends de simulação das sub-rotinas quânticas."""

from .backend import BackendHandle, BackendKind
from .circuits import FlaggedIndexCircuit, PreparableCircuit, UniformSearchCircuit
from .state import QState, Register
