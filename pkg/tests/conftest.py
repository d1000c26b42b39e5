import json
from pathlib import Path

import pytest

from secondary_operad import validate_configuration

DATA = Path(__file__).resolve().parent.parent / "data"

CONFIGS = ["square", "triangle_interior", "pentagon", "hexagon", "nested", "frustum"]


def points(name):
    return [tuple(p) for p in json.loads((DATA / f"{name}.json").read_text())["points"]]


def load(name):
    return validate_configuration(points(name))


@pytest.fixture(scope="session")
def data_dir():
    return DATA


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
