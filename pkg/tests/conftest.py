"""
Shared fixtures for the dgx tests
"""
from pathlib import Path

import pytest

from src.cli.dgx_format import parse_file
from src.core.exactla import FieldSpec

FIXTURES = Path(__file__).resolve().parent.parent / "data" / "fixtures"


@pytest.fixture
def f2():
    return FieldSpec.prime(2)


@pytest.fixture
def q():
    return FieldSpec.rationals()


@pytest.fixture
def fixture_path():
    def path(name: str) -> str:
        return str(FIXTURES / name)
    return path


@pytest.fixture(scope="session")
def a2_workspace():
    """The A2 complexes workspace, parsed and validated once"""
    return parse_file(str(FIXTURES / "a2.dgx"))


@pytest.fixture(scope="session")
def three_cycle_workspace():
    return parse_file(str(FIXTURES / "three_cycle.dgx"))
