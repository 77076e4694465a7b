import os

import pytest

from rotsys import core, geometry
from rotsys.catalog import load_catalog


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ROTSYS_EXTENDED"):
        return
    skip = pytest.mark.skip(reason="extended run; set ROTSYS_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def cat():
    return load_catalog()


@pytest.fixture(scope="session")
def c5():
    return core.rotation_from_points(geometry.convex_position(5))


def random_geometric(n, seed):
    return core.rotation_from_points(geometry.random_points(n, rng=seed))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for res in sorted(RESULTS, key=lambda r: r.number):
        terminalreporter.write_line(res.line())
