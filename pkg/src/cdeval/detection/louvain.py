"""Louvain modularity optimisation (Blondel et al. 2008)."""

from __future__ import annotations

import time

import numpy as np

from .. import kernels
from ..graph import Graph, Partition
from ..metrics.structural import modularity
from ._base import modularity_result, require_edges
from ._levels import LevelGraph, dense_labels

DEFAULT_SEED = 0


def louvain(g: Graph, seed: int | None = DEFAULT_SEED, *, max_levels: int = 100, refine: bool = True):
    """Multilevel local moving with a seeded node visit order.

    Each level runs single-node moves (in a seeded random permutation) until
    no move raises modularity, then collapses communities into nodes. The run
    stops when a level makes no move. With ``refine`` the final partition then
    gets Kernighan-Lin style vertex-mover passes on the original graph, which
    can escape local optima that the level moves settle in; a pass is kept
    only when it raises modularity, so the end state still admits no
    improving single-node move. ``trace`` holds the modularity on the original
    graph after each level, plus one entry for the refinement when it helps.

    Args:
        g: Graph with at least one edge.
        seed: Seed for the visit-order permutations. ``None`` uses the fixed
            default so plain calls are reproducible.
        max_levels: Safety cap on the number of aggregation levels.
        refine: Run the vertex-mover refinement after the last level.

    Returns:
        DetectionResult with ``objective`` equal to the modularity.
    """
    require_edges(g, "LM")
    seed = DEFAULT_SEED if seed is None else seed
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    m2 = 2.0 * g.total_weight

    level = LevelGraph.from_graph(g)
    membership = np.arange(g.n, dtype=np.int64)
    trace = []
    for _ in range(max_levels):
        indptr, indices, weights = level.csr()
        comm = np.arange(level.n, dtype=np.int64)
        order = rng.permutation(level.n).astype(np.int64)
        moves = kernels.louvain_local_move(
            indptr, indices, weights, np.ascontiguousarray(level.strength), order, comm, m2
        )
        if moves == 0:
            break
        comm = dense_labels(comm)
        membership = comm[membership]
        trace.append(modularity(g, Partition(g.nodes, membership)))
        level = level.collapse(comm)
        if level.n == 1:
            break

    if not trace:
        trace.append(modularity(g, Partition(g.nodes, membership)))
    if refine:
        indptr, indices, weights = g.csr()
        membership = dense_labels(membership)
        if kernels.louvain_refine(indptr, indices, weights, g.strength(), membership, m2):
            membership = dense_labels(membership)
            trace.append(modularity(g, Partition(g.nodes, membership)))
    return modularity_result(
        "LM", seed, g, membership, time.perf_counter() - start, trace, {"backend": kernels.BACKEND}
    )
