import pytest

from amie.floorplan import load_reference_plan
from amie.positioning import reference_layout
from amie.rfmodel import DEFAULT_RADIO


@pytest.fixture(scope="session")
def plan():
    return load_reference_plan()


@pytest.fixture(scope="session")
def layout():
    return reference_layout()


@pytest.fixture(scope="session")
def radio():
    return DEFAULT_RADIO
