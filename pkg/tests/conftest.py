import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rand_op(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


class Solved:
    def __init__(self, cls):
        from d22chain.bae import solve_bae
        from d22chain.fusion import tq_model
        from d22chain.sampling import default_spec

        self.spec = default_spec(1, cls)
        self.pattern = self.spec.pattern.value
        self.model = tq_model(self.spec)
        self.result = solve_bae(self.model)


@pytest.fixture(scope="session")
def solved_one():
    return Solved("I")


@pytest.fixture(scope="session")
def solved_two():
    return Solved("II")


@pytest.fixture(scope="session", params=["I", "II"])
def solved(request, solved_one, solved_two):
    return solved_one if request.param == "I" else solved_two


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
