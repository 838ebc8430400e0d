import numpy as np
import pytest

from snapens import ModelSpec, ScheduleSpec, TrainConfig, gen_two_moons, iterations_for, train

# (number, name, passed, detail) tuples filled in by test_acceptance.py
ACCEPTANCE_RESULTS = []


def record_criterion(number: int, name: str, passed: bool, detail: str = "") -> bool:
    ACCEPTANCE_RESULTS.append((number, name, passed, detail))
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number} [{status}] {name}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def moons200():
    return gen_two_moons(200, 0.1, seed=3)


@pytest.fixture(scope="session")
def tiny_run(moons200):
    """A small completed snapshot-mode run: 4 cycles on two moons."""
    model = ModelSpec((2, 16, 2))
    total = iterations_for(len(moons200), 25, 16)  # 8 batches/epoch x 16 epochs
    schedule = ScheduleSpec("cyclic_cosine", 0.2, total, 4)
    config = TrainConfig(model, schedule, "snapshot", epochs=16, batch_size=25, seed=11)
    return config, train(config, moons200)
