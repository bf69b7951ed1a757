import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_box(rng, n, q=None, width=0.6):
    """A random feasible box-constrained simplex slice over ``n`` atoms."""
    center = rng.dirichlet(np.ones(n))
    half = rng.uniform(0.02, width / 2, size=n)
    lower = np.clip(center - half, 0, 1)
    upper = np.clip(center + half, 0, 1)
    return lower, upper


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not getattr(module, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
