import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cnlab.grid import Grid


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def g2_16():
    return Grid(2, 16)


@pytest.fixture
def g2_32():
    return Grid(2, 32)


@pytest.fixture
def g3_16():
    return Grid(3, 16)
