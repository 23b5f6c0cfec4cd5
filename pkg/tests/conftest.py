import random

import pytest
from hypothesis import HealthCheck, settings

from bundlecover.exact_algebra import Perm, random_transitive

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(12345)


def perms_from_seed(seed: int, degree: int, count: int = 2) -> list[Perm]:
    return random_transitive(degree, count, random.Random(seed))
