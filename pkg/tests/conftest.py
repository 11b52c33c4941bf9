"""Shared fixtures: the reference catalog is built once per session."""

import pytest

from staticgeo.catalog import default_catalog


@pytest.fixture(scope="session")
def catalog_entries():
    return default_catalog()


@pytest.fixture(scope="session")
def entry_by_name(catalog_entries):
    return {e.name: e for e in catalog_entries}
