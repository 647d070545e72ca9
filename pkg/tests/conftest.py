import sys
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def two_cliques(k: int = 5, bridge: bool = True) -> nx.Graph:
    g = nx.Graph()
    left = [f"a{i}" for i in range(k)]
    right = [f"b{i}" for i in range(k)]
    for side in (left, right):
        for i, u in enumerate(side):
            for v in side[i + 1 :]:
                g.add_edge(u, v, weight=1.0)
    if bridge:
        g.add_edge(left[0], right[0], weight=1.0)
    return g


def random_graph(n: int, p: float, seed: int) -> nx.Graph:
    g = nx.gnp_random_graph(n, p, seed=seed)
    return nx.relabel_nodes(g, {i: f"v{i:02d}" for i in g.nodes})


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
