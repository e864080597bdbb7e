import random

import pytest

from rankcert import ConstructionParams, FieldSpec, Tensor3, construction_tensor

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def w21():
    return construction_tensor(ConstructionParams(2, 1))


@pytest.fixture
def w22():
    return construction_tensor(ConstructionParams(2, 2))


def random_tensor(rng: random.Random, dims, p: int = 2, density: float = 0.5) -> Tensor3:
    entries = {}
    for i in range(1, dims[0] + 1):
        for j in range(1, dims[1] + 1):
            for k in range(1, dims[2] + 1):
                if rng.random() < density:
                    entries[(i, j, k)] = rng.randrange(1, p)
    return Tensor3(dims, FieldSpec(p), entries)
