
import numpy as np
import pytest

from qkmismatch.common import RngSeed
from qkmismatch.quantum.backend import BackendHandle, BackendKind
from qkmismatch.settings import Settings


@pytest.fixture
def rng() -> np.random.Generator:
    return RngSeed(20240611).generator()


@pytest.fixture
def analytic() -> BackendHandle:
    return BackendHandle(BackendKind.ANALYTIC)


@pytest.fixture
def exact() -> BackendHandle:
    return BackendHandle(BackendKind.EXACT)


@pytest.fixture
def settings() -> Settings:
    return Settings()
