import pytest

from llgpq.analysis.estimation import Sample
from llgpq.cli.dataset import parse_dataset


def pytest_configure(config):  # type: ignore
    config.addinivalue_line(
        "markers", "slow: long Monte Carlo coverage and interval reproductions"
    )


@pytest.fixture
def grinder() -> Sample:
    return parse_dataset("grinder")


@pytest.fixture
def reactor() -> Sample:
    return parse_dataset("reactor")
