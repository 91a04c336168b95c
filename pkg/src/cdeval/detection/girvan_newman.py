"""Divisive clustering by repeated removal of the highest-betweenness edge."""

from __future__ import annotations

import time

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .. import kernels
from ..graph import Graph, Partition, connected_components
from ..metrics.structural import modularity
from ._base import Dendrogram, modularity_result, require_edges

TIE_RTOL = 1e-9


def edge_betweenness(g: Graph) -> dict[tuple[str, str], float]:
    """Exact hop-count edge betweenness; each unordered node pair counted once."""
    scores = _betweenness_array(g, np.ones(g.edge_count, dtype=np.uint8), np.arange(g.n))
    return {(a, b): float(s) for (a, b, _), s in zip(g.edges(), scores)}


def _betweenness_array(g: Graph, alive: np.ndarray, sources: np.ndarray) -> np.ndarray:
    indptr, indices, _ = g.csr()
    raw = kernels.edge_betweenness(
        indptr, indices, g.csr_edge_ids(), alive, np.ascontiguousarray(sources, dtype=np.int64), g.edge_count
    )
    return raw / 2.0


def _reachable(g: Graph, alive: np.ndarray, start: int) -> np.ndarray:
    keep = alive.astype(bool)
    mat = sparse.coo_matrix(
        (np.ones(int(keep.sum())), (g.edge_u[keep], g.edge_v[keep])), shape=(g.n, g.n)
    ).tocsr()
    seen = np.zeros(g.n, dtype=bool)
    seen[csgraph.breadth_first_order(mat, start, directed=False, return_predecessors=False)] = True
    return seen


def girvan_newman_dendrogram(g: Graph) -> Dendrogram:
    """Remove edges one at a time, recording the components whenever they split.

    The edge removed is the one with the largest betweenness; scores within
    a relative ``TIE_RTOL`` of the maximum tie, and ties go to the smallest
    ``(u, v)`` index pair. Betweenness is recomputed only inside the
    component that lost the edge.
    """
    require_edges(g, "GN")
    labels = connected_components(g).labels.copy()
    next_label = int(labels.max()) + 1
    alive = np.ones(g.edge_count, dtype=np.uint8)
    eb = _betweenness_array(g, alive, np.arange(g.n))

    dendro = Dendrogram(g.nodes, [modularity(g, Partition(g.nodes, labels))], level_labels=[labels.copy()])
    eu, ev = g.edge_u, g.edge_v
    remaining = g.edge_count
    while remaining:
        live = np.flatnonzero(alive)
        scores = eb[live]
        top = scores.max()
        e = int(live[np.flatnonzero(scores >= top - TIE_RTOL * max(top, 1.0))[0]])
        alive[e] = 0
        remaining -= 1
        u, v = int(eu[e]), int(ev[e])
        comp = labels == labels[u]
        side = _reachable(g, alive, u)
        if not side[v]:
            labels[comp & ~side] = next_label
            next_label += 1
            dendro.events.append((u, v))
            dendro.modularity.append(modularity(g, Partition(g.nodes, labels)))
            dendro.level_labels.append(labels.copy())
        in_comp = comp[eu] & alive.astype(bool)
        eb[alive == 0] = -np.inf
        if in_comp.any():
            fresh = _betweenness_array(g, alive, np.flatnonzero(comp))
            eb[in_comp] = fresh[in_comp]
    return dendro


def girvan_newman(g: Graph):
    start = time.perf_counter()
    dendro = girvan_newman_dendrogram(g)
    best = dendro.best_level()
    return modularity_result(
        "GN",
        None,
        g,
        dendro.labels_at(best),
        time.perf_counter() - start,
        dendro.modularity,
        {"level": best, "backend": kernels.BACKEND},
    )
