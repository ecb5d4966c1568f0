import numpy as np
import pytest

from graphstate.catalog import random_marginal


@pytest.fixture(scope="session")
def corpus():
    """Fixed random corpus of valid marginals (n <= 8, d_i <= 3)."""
    rng = np.random.default_rng(20240817)
    return [random_marginal(rng, max_bonds=4, max_dim=3) for _ in range(50)]


@pytest.fixture(scope="session")
def small_corpus():
    """Smaller instances, cheap enough for exact-engine cross-checks."""
    rng = np.random.default_rng(91)
    return [random_marginal(rng, max_bonds=2, max_dim=2) for _ in range(20)]
