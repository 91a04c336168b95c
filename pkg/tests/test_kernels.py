import os
import subprocess
import sys

import numpy as np
import pytest
from conftest import random_graph
from oracles import nx_edge_betweenness, to_nx

from cdeval import _pykernels, kernels

cy = pytest.importorskip("cdeval._kernels", reason="compiled extension not built")


def _random_graphs(rng, count, n_max=40):
    for _ in range(count):
        n = int(rng.integers(2, n_max))
        g = random_graph(rng, n, float(rng.uniform(0.05, 0.5)), weighted=bool(rng.random() < 0.5))
        if g.edge_count:
            yield g


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_forced_fallback():
    env = dict(os.environ, CDEVAL_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from cdeval import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_betweenness_backends_identical(rng):
    for g in _random_graphs(rng, 40):
        indptr, indices, _ = g.csr()
        alive = (rng.random(g.edge_count) < 0.8).astype(np.uint8)
        sources = np.arange(g.n, dtype=np.int64)
        a = _pykernels.edge_betweenness(indptr, indices, g.csr_edge_ids(), alive, sources, g.edge_count)
        b = cy.edge_betweenness(indptr, indices, g.csr_edge_ids(), alive, sources, g.edge_count)
        assert np.array_equal(a, b)


def test_betweenness_matches_networkx(rng):
    for g in _random_graphs(rng, 30, 25):
        for mod in (_pykernels, cy):
            indptr, indices, _ = g.csr()
            raw = mod.edge_betweenness(indptr, indices, g.csr_edge_ids(), np.ones(g.edge_count, dtype=np.uint8),
                                       np.arange(g.n, dtype=np.int64), g.edge_count)
            ref = nx_edge_betweenness(to_nx(g.nodes, g.edges()))
            for (a, b, _), score in zip(g.edges(), raw / 2.0):
                assert score == pytest.approx(ref[tuple(sorted((a, b)))], abs=1e-9)


def test_louvain_move_backends_identical(rng):
    for g in _random_graphs(rng, 40):
        indptr, indices, weights = g.csr()
        order = rng.permutation(g.n).astype(np.int64)
        c1 = np.arange(g.n, dtype=np.int64)
        c2 = c1.copy()
        m1 = _pykernels.louvain_local_move(indptr, indices, weights, g.strength(), order, c1, 2 * g.total_weight)
        m2 = cy.louvain_local_move(indptr, indices, weights, g.strength(), order, c2, 2 * g.total_weight)
        assert m1 == m2
        assert np.array_equal(c1, c2)


def test_label_propagation_backends_identical(rng):
    for g in _random_graphs(rng, 40):
        indptr, indices, weights = g.csr()
        l1 = np.arange(g.n, dtype=np.int64)
        l2 = l1.copy()
        for _ in range(5):
            order = rng.permutation(g.n).astype(np.int64)
            u = rng.random(g.n)
            c1 = _pykernels.label_propagation_sweep(indptr, indices, weights, order, u, l1)
            c2 = cy.label_propagation_sweep(indptr, indices, weights, order, u, l2)
            assert c1 == c2
            assert np.array_equal(l1, l2)
            assert bool(_pykernels.label_propagation_stable(indptr, indices, weights, l1)) == bool(
                cy.label_propagation_stable(indptr, indices, weights, l2))


def test_detection_identical_across_backends():
    code = (
        "from cdeval.synth import PlantedConfig, planted_partition\n"
        "from cdeval.detection import louvain, label_propagation, girvan_newman\n"
        "g, _ = planted_partition(PlantedConfig(sizes=(12, 12, 12), p_in=0.4, p_out=0.05, seed=3))\n"
        "for r in (louvain(g, 1), label_propagation(g, 2), girvan_newman(g)):\n"
        "    print(r.algorithm, r.partition.labels.tolist())\n"
    )
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, CDEVAL_PURE_PYTHON=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                                   check=True).stdout)
    assert outs[0] == outs[1]


def test_louvain_refine_backends_identical(rng):
    for g in _random_graphs(rng, 40, 30):
        indptr, indices, weights = g.csr()
        c1 = rng.integers(0, max(1, g.n // 3), size=g.n).astype(np.int64)
        c2 = c1.copy()
        p1 = _pykernels.louvain_refine(indptr, indices, weights, g.strength(), c1, 2 * g.total_weight)
        p2 = cy.louvain_refine(indptr, indices, weights, g.strength(), c2, 2 * g.total_weight)
        assert p1 == p2
        assert np.array_equal(c1, c2)
