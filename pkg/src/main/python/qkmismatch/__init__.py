"""Atalhos para as principais funções do pacote ``qkmismatch``."""

from .common import MatchInstance, QueryCounter, RngSeed, validateInstance
from .matching import approxBoundedDistMatching, approxBoundedHammingDecider
from .quantum import BackendHandle, BackendKind
from .settings import Settings, loadSettings
