from pathlib import Path

import pytest

from shintani.domain import build_signed_domain
from shintani.io import load_spec
from shintani.numfield import NumberField

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def build_fixture(name):
    K, units, N, tw = load_spec(FIXTURES / f"{name}.json").resolve()
    return build_signed_domain(K, units, N, tw)


@pytest.fixture(scope="session")
def sqrt5():
    return NumberField([-1, -1, 1])


@pytest.fixture(scope="session")
def cbrt2():
    return NumberField([-2, 0, 0, 1])


@pytest.fixture(scope="session")
def sqrt5_domain():
    return build_fixture("sqrt5")


@pytest.fixture(scope="session")
def cbrt2_domain():
    return build_fixture("cbrt2")


@pytest.fixture(scope="session")
def quartic_domain():
    return build_fixture("quartic")


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES
