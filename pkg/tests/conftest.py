from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from monolift import ingest

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str):
    model = ingest.parse_model((FIXTURES / f"{name}.model.json").read_bytes())
    boundary = ingest.parse_boundary((FIXTURES / f"{name}.boundary.json").read_bytes(), model)
    return model, boundary


@pytest.fixture
def f1():
    return load_fixture("f1")


@pytest.fixture
def f2():
    return load_fixture("f2")


@pytest.fixture
def f3():
    return load_fixture("f3")


@pytest.fixture
def f4():
    return load_fixture("f4")


@pytest.fixture
def f5():
    return load_fixture("f5")
