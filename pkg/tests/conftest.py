import pytest
from hypothesis import HealthCheck, settings

from qforms import arith

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def sieve_10k() -> arith.SieveTables:
    return arith.build_sieve(10_000)


@pytest.fixture(scope="session")
def sieve_1m() -> arith.SieveTables:
    return arith.build_sieve(1_000_000)
