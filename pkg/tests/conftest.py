import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import random_quasi_copula  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture(scope="session")
def fixture_batch():
    """Deterministic mixed batch of random dyadic quasi-copulas."""
    r = random.Random(991)
    out = [random_quasi_copula(r, 8) for _ in range(12)]
    out += [random_quasi_copula(r, 16) for _ in range(4)]
    return out
