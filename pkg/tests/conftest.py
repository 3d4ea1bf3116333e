import numpy as np
import pytest

from bifield.grid import make_grid


@pytest.fixture
def grid8():
    return make_grid(8, 0.5)


@pytest.fixture
def grid16():
    return make_grid(16, 0.25)


@pytest.fixture
def grid64():
    return make_grid(64, 0.25)


def complex_array(seed: int, n: int) -> np.ndarray:
    """Deterministic complex test vector for a given seed."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
