"""Asynchronous label propagation (Raghavan, Albert & Kumara 2007)."""

from __future__ import annotations

import time

import numpy as np

from .. import kernels
from ..graph import Graph, Partition
from ._base import ConvergenceError, DetectionResult, require_edges

MAX_SWEEPS = 1000


def label_propagation(g: Graph, seed: int = 0, *, max_sweeps: int = MAX_SWEEPS) -> DetectionResult:
    """Run seeded asynchronous label propagation to a stable labelling.

    Every sweep draws a fresh node permutation and one uniform per position
    for tie-breaking; ties among maximal-weight labels are resolved by
    ``ties[floor(u * len(ties))]`` with ties listed in neighbor order.
    """
    require_edges(g, "LP")
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    indptr, indices, weights = g.csr()
    labels = np.arange(g.n, dtype=np.int64)
    for sweep in range(1, max_sweeps + 1):
        order = rng.permutation(g.n).astype(np.int64)
        uniforms = rng.random(g.n)
        kernels.label_propagation_sweep(indptr, indices, weights, order, uniforms, labels)
        if kernels.label_propagation_stable(indptr, indices, weights, labels):
            break
    else:
        raise ConvergenceError(f"no stable labelling after {max_sweeps} sweeps", "LP")
    return DetectionResult(
        algorithm="LP",
        seed=seed,
        partition=Partition(g.nodes, labels),
        wall_time=time.perf_counter() - start,
        objective=None,
        objective_name=None,
        info={"sweeps": sweep, "backend": kernels.BACKEND},
    )
