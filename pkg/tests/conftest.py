from __future__ import annotations

import pytest

from confhom.cellcx import build_slice
from confhom.di import reset_container
from confhom.extengine import build_Bu


@pytest.fixture
def database_url(tmp_path):
    return f"sqlite:///{tmp_path / 'confhom.db'}"


@pytest.fixture
def container(database_url):
    c = reset_container(database_url)
    c.ensure_ready()
    return c


@pytest.fixture(scope="session")
def torus_slices():
    return {n: build_slice(1, n) for n in range(4)}


@pytest.fixture(scope="session")
def disc_slices():
    return {n: build_slice(0, n) for n in range(5)}


@pytest.fixture(scope="session")
def b2():
    return build_Bu(2, 3)
