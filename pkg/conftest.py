"""Shared fixtures: the catalog groups and a bounded hypothesis profile."""

import pytest
from hypothesis import HealthCheck, settings

from permgroup import named_group

settings.register_profile(
    "arboru",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("arboru")


@pytest.fixture(scope="session")
def sym3():
    return named_group("Sym3")


@pytest.fixture(scope="session")
def sym4():
    return named_group("Sym4")


@pytest.fixture(scope="session")
def sym5():
    return named_group("Sym5")


@pytest.fixture(scope="session")
def a5():
    return named_group("A5")


@pytest.fixture(scope="session")
def d5():
    return named_group("D5")


@pytest.fixture(scope="session")
def c4():
    return named_group("C4")


@pytest.fixture(scope="session")
def c5():
    return named_group("C5")
