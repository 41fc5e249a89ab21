import numpy as np
import pytest

from src.core.models import StabilizerGroup
from src.services.lattice.lattice_codes import build_shor, build_toric
from src.utils.translations import pauli_from_text


def make_group(texts, n, d=2, labels=()):
    """Group from compact Pauli strings, e.g. make_group(['Z0 Z1', 'X0 X1'], 2)."""
    return StabilizerGroup(n, d, tuple(pauli_from_text(t, n, d) for t in texts), tuple(labels))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope='session')
def toric22():
    return build_toric(2, 2)


@pytest.fixture(scope='session')
def shor():
    return build_shor()


@pytest.fixture
def ghz():
    """Three-qubit GHZ stabilizers: a unique +1 state."""
    return make_group(['Z0 Z1', 'Z1 Z2', 'X0 X1 X2'], 3)
