"""Decisor de Hamming, casamento aproximado e o arcabouço de tentativas."""

from .decider import approxBoundedHammingDecider, computeBeta, computeM, deriveDeciderParams
from .matcher import MatchReport, PositionDecider, approxBoundedDistMatching, positionDecider
