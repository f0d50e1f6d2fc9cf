import time
from importlib.resources import files

import pytest

from geodiscover.engine import Options, discover
from geodiscover.parser import parse

FIXTURES = ("midline", "parallelogram", "hexagon", "euler", "ninepoint", "pappus")


def source(name: str) -> str:
    return (files("geodiscover") / "fixtures" / f"{name}.gd").read_text()


def load(name: str):
    return parse(source(name))


class Runs:
    """Discovery results shared across the session (the large fixtures are slow)."""

    def __init__(self):
        self.cache = {}

    def get(self, name: str, **opts):
        key = (name, tuple(sorted(opts.items())))
        if key not in self.cache:
            c = load(name)
            start = time.monotonic()
            report = discover(c, c.targets[0], Options.from_construction(c, **opts))
            self.cache[key] = (c, report, time.monotonic() - start)
        return self.cache[key]


@pytest.fixture(scope="session")
def runs():
    return Runs()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
