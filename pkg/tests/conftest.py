import numpy as np
import pytest

from kerind.actions import build_action
from kerind.groups import build_group
from kerind.rings import build_ring
from kerind.scenario import load_scenario


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def ring_action(ring: str, group: str, rules, require_star: bool = True):
    return build_action(build_ring(ring), build_group(group), rules, require_star=require_star)


def scenario_action(name: str):
    return load_scenario(name).action


@pytest.fixture
def dual3():
    """(Z/3)[x]/(x^2) with x -> -x."""
    return ring_action("(Z/3)[x]/(x^2)", "C2", ["negate"])


@pytest.fixture
def f4():
    return ring_action("F4", "C2", ["frobenius"])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
