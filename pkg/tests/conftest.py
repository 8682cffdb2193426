import pytest

from smoothfq.config import RunConfig
from smoothfq.fields import parse_field_spec


@pytest.fixture(scope="session")
def f2():
    return parse_field_spec("2")


@pytest.fixture(scope="session")
def f3():
    return parse_field_spec("3")


@pytest.fixture(scope="session")
def f4():
    return parse_field_spec("2^2")


@pytest.fixture(scope="session")
def f5():
    return parse_field_spec("5")


@pytest.fixture(scope="session")
def cfg():
    # generous budgets so unit tests never trip the guard rails
    return RunConfig()
