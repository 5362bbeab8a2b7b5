import numpy as np
import pytest

from igtc.model import ModelParams
from igtc.solver import enumerate_branches


@pytest.fixture(scope="session")
def family_factory():
    """Memoized branch-family solver shared across the whole run.

    get(c, delta, two_s, m) -> BranchFamily; get.solved holds every family
    produced during the session, which the invariant-suite test sweeps.
    """
    solved = {}

    def get(c, delta, two_s, m):
        key = (float(c), float(delta), int(two_s), int(m))
        if key not in solved:
            params = ModelParams(c=key[0], delta=key[1], two_s=key[2], m_excitations=key[3])
            solved[key] = enumerate_branches(params)
        return solved[key]

    get.solved = solved
    return get


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


def pytest_configure(config):
    config._acceptance_lines = {}


@pytest.fixture
def acceptance(request):
    """Recorder for the per-criterion summary printed after the run."""

    def record(number: int, passed: bool, detail: str):
        request.config._acceptance_lines[number] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        passed, detail = lines[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE CRITERION {number}: {verdict} - {detail}")
