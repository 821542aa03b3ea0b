import pytest
from hypothesis import HealthCheck, settings

from clmlab.groups import builtin_group

settings.register_profile(
    "clmlab",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("clmlab")


@pytest.fixture(scope="session")
def c2():
    return builtin_group("C2")


@pytest.fixture(scope="session")
def s3():
    return builtin_group("S3")


@pytest.fixture(scope="session")
def d4():
    return builtin_group("D4")


@pytest.fixture(scope="session")
def a5():
    return builtin_group("A5")
