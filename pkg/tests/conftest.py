import numpy as np
import pytest

from lierec.groups import GroupKind

ALL_KINDS = list(GroupKind)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


def random_coords(rng, kind, max_norm=1.0):
    v = rng.normal(size=kind.algebra_dim)
    return v / np.linalg.norm(v) * rng.uniform(0.0, max_norm)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
