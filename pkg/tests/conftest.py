import numpy as np
import pytest

from eigpert import build_structure, extract_triple, random_linear_family

SUITE_SEEDS = range(200)


def suite_dimension(seed):
    return 2 + seed % 19


def suite_family(seed):
    return random_linear_family(suite_dimension(seed), seed)


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture(scope="session")
def suite():
    """The 200 seeded random linear families with their structure at tau0."""
    out = []
    for seed in SUITE_SEEDS:
        F = suite_family(seed)
        A0 = F(0.0)
        t = extract_triple(A0)
        out.append((seed, F, build_structure(A0, t)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
