import sys

import pytest

from bivapprox.catalog import CATALOG
from bivapprox.domain import DerivativeField, Rectangle


@pytest.fixture
def unit():
    return Rectangle.unit()


def field(source):
    return DerivativeField.from_source(source)


CATALOG_IDS = [e.name for e in CATALOG]


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[k][1])
