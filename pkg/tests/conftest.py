import numpy as np
import pytest

from katolab.generators import SeedPlan


@pytest.fixture
def rng():
    return SeedPlan(20240817).rng()


def stream_rng(stream: int) -> np.random.Generator:
    return SeedPlan(20240817, stream).rng()
