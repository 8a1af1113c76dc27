import numpy as np
import pytest

from fermatw.maps import canonical_lattice


@pytest.fixture(scope="session")
def lat1():
    """Hexagonal lattice with (g2, g3) = (0, 1)."""
    return canonical_lattice(1.0)


@pytest.fixture(scope="session")
def lat8():
    """Hexagonal lattice with (g2, g3) = (0, 8)."""
    return canonical_lattice(8.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
