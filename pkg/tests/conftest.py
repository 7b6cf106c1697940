import numpy as np
import pytest
from hypothesis import strategies as st

from strobust.graph import IoDag, chain, complete_dag


def random_dag(n, p, seed, n_io=None):
    """G(n, p) restricted to forward edges; first/last ``n_io`` nodes are I/O."""
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    k = n_io if n_io is not None else min(2, n)
    return IoDag(n, tuple(edges), tuple(range(k)), tuple(range(n - k, n)), f"random n={n} p={p} seed={seed}")


@st.composite
def dags(draw, min_nodes=1, max_nodes=10):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    k = draw(st.integers(0, n))
    return IoDag(n, tuple(p for p, keep in zip(pairs, mask) if keep), tuple(range(k)), tuple(range(n - k, n)))


def matching(n):
    """Input i joined to output i only."""
    return IoDag(2 * n, tuple((i, n + i) for i in range(n)), tuple(range(n)), tuple(range(n, 2 * n)), f"matching {n}")


def hub_graph():
    """Superconcentrator on two terminals that cannot route the crossed pairing."""
    return IoDag(5, ((0, 2), (0, 3), (1, 2), (1, 4), (2, 3), (2, 4)), (0, 1), (3, 4), "hub")


@pytest.fixture
def k4():
    return complete_dag(4, "K_4")


@pytest.fixture
def chain5():
    return chain(5, "chain 5")


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
