import pytest
from hypothesis import HealthCheck, settings

from qpair import cartan_type

settings.register_profile(
    "qpair", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qpair")


@pytest.fixture(scope="session")
def A1():
    return cartan_type("A1")


@pytest.fixture(scope="session")
def A2():
    return cartan_type("A2")


@pytest.fixture(scope="session")
def B2():
    return cartan_type("B2")


@pytest.fixture(scope="session")
def G2():
    return cartan_type("G2")
