import numpy as np
import pytest

from stochdec.graph import SatisfactionTable

FOUR_SYMBOL_ROWS = [(0, 0, 0), (0, 1, 1), (1, 3, 2), (1, 2, 3), (2, 2, 0), (2, 3, 1), (3, 1, 2), (3, 0, 3)]


@pytest.fixture
def four_symbol():
    return SatisfactionTable((4, 4, 4), FOUR_SYMBOL_ROWS)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
