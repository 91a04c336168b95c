import sys
from importlib.resources import files
from pathlib import Path

import numpy as np
import pytest

from cdeval.graph import Graph, Partition, load_edge_list, load_partition

sys.path.insert(0, str(Path(__file__).parent))

DATA = files("cdeval") / "data"

# triangles a-b-c and d-e-f joined by the bridge c-d
BRIDGE_EDGES = [("a", "b"), ("a", "c"), ("b", "c"), ("c", "d"), ("d", "e"), ("d", "f"), ("e", "f")]


def make_graph(edges, nodes=None, weight=1.0):
    if nodes is None:
        nodes = []
        for e in edges:
            for v in e[:2]:
                if v not in nodes:
                    nodes.append(v)
    return Graph(nodes, [(e[0], e[1], e[2] if len(e) > 2 else weight) for e in edges])


def random_graph(rng, n, p, weighted=False, connected=False):
    """Erdos-Renyi graph on nodes "0".."n-1"; optionally forced connected by a random spanning path."""
    names = [str(i) for i in range(n)]
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges[(i, j)] = float(rng.integers(1, 5)) if weighted else 1.0
    if connected:
        perm = rng.permutation(n)
        for a, b in zip(perm[:-1], perm[1:]):
            key = (min(a, b), max(a, b))
            edges.setdefault(key, 1.0)
    return Graph(names, [(names[i], names[j], w) for (i, j), w in edges.items()])


def random_labels(rng, n, k=None):
    k = k or int(rng.integers(1, n + 1))
    return rng.integers(0, k, size=n).tolist()


@pytest.fixture
def bridge():
    return make_graph(BRIDGE_EDGES)


@pytest.fixture
def triangles_partition():
    return Partition(list("abcdef"), [0, 0, 0, 1, 1, 1])


@pytest.fixture(scope="session")
def karate():
    return load_edge_list(DATA / "karate.edges")


@pytest.fixture(scope="session")
def karate_gt(karate):
    return load_partition(DATA / "karate.groundtruth", karate)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one pass/fail line per acceptance criterion in the terminal summary
_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        num, label = name.split("_")[2], " ".join(name.split("_")[3:])
        verdict = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE criterion {num} ({label}): {verdict}")
