import os

import pytest
from hypothesis import HealthCheck, settings

from lamprate.groups import FreeGroup, FreeProduct, FreeProductC2C2, IntegerLattice

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def f2():
    return FreeGroup(2)


@pytest.fixture
def z_unit():
    return IntegerLattice.from_steps({1: 1})


@pytest.fixture
def z_weighted():
    return IntegerLattice.from_steps({1: 1, 2: 3, 3: 5})


@pytest.fixture
def c2c2():
    return FreeProductC2C2()


def srw_mu0(group):
    n = len(group.generators.elements)
    return {x: f"1/{n}" for x in group.generators.elements}


def roster():
    """Backends used by the property tests, with mixed rational lengths."""
    return [
        FreeGroup(2),
        FreeGroup(2, ["3/2", "1/3"]),
        FreeProduct(1, 1, ["2", "1/2"]),
        FreeProductC2C2("1", "5/2"),
        FreeProduct(0, 3, [1, 2, 3]),
        IntegerLattice.from_steps({1: 1}),
        IntegerLattice.from_steps({1: 1, 2: "3/2"}),
        IntegerLattice.from_steps({1: 1, 2: 3, 3: 5}),
        IntegerLattice.from_steps({(1, 0): 1, (0, 1): "2/3"}),
        IntegerLattice.from_steps({(1, 0): 1, (0, 1): 2, (1, 1): "5/2"}),
    ]


_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's verdict; the summary prints them all."""
    results = request.config.stash.setdefault(_CRITERIA, {})

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        results[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_CRITERIA, {})
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
