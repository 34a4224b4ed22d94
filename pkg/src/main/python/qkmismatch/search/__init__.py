"""Amplificação de amplitude (QSearch') e busca fraca com entradas neutras."""

from .amplification import QSearchConfig, QSearchResult, qsearchPrime, worstCaseApplications
from .weak import BoostConfig, BoundedErrorDecider, TableDecider, WeakSearchResult, weakSearch
