import random

import pytest
from hypothesis import HealthCheck, settings

from epsm.packed_word import ReferenceBackend, WordConfig
from epsm.simd import SimdBackend

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NIBBLE = WordConfig(48, 4)  # the alpha=12, gamma=4 layout of the worked figures


@pytest.fixture(scope="session")
def ref():
    return ReferenceBackend()


@pytest.fixture(scope="session")
def simd():
    return SimdBackend()


@pytest.fixture(scope="session")
def nibble():
    return ReferenceBackend(NIBBLE)


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_bytes(rng, n, sigma=256):
    return bytes(rng.randrange(sigma) for _ in range(n))
