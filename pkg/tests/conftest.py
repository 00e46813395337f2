from importlib import resources
from pathlib import Path

import pytest


def data_path(name: str) -> Path:
    return Path(str(resources.files("greeneval.data").joinpath(name)))


@pytest.fixture
def table1_path() -> Path:
    return data_path("table1.csv")


@pytest.fixture
def table2_path() -> Path:
    return data_path("table2.csv")


@pytest.fixture
def seed_catalog_path() -> Path:
    return data_path("catalog.jsonl")
