"""Planted-partition benchmark graphs and sporadic-noise injection."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, Partition, TemporalStream

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PlantedConfig:
    sizes: tuple[int, ...] = (32, 32, 32, 32)
    p_in: float = 0.3
    p_out: float = 0.01
    w_in: int = 2
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if any(s < 1 for s in sizes):
            raise ValueError("community sizes must be positive")
        if sum(sizes) < 2:
            raise ValueError("need at least 2 nodes in total")
        for name in ("p_in", "p_out"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if int(self.w_in) != self.w_in or self.w_in < 1:
            raise ValueError("w_in must be an integer >= 1")
        if self.p_in <= self.p_out:
            log.warning("p_in=%g <= p_out=%g: no assortative structure planted", self.p_in, self.p_out)
        object.__setattr__(self, "sizes", sizes)


def planted_partition(cfg: PlantedConfig) -> tuple[Graph, Partition]:
    """Sample a planted-partition graph and its block ground truth.

    Every node pair draws one uniform, in row-major ``(i < j)`` order, and
    becomes an edge of weight ``w_in`` if the draw falls under ``p_in``
    (same block) or ``p_out`` (different blocks). Nodes are named ``"0".."n-1"``.
    """
    n = sum(cfg.sizes)
    block = np.repeat(np.arange(len(cfg.sizes)), cfg.sizes)
    rng = np.random.default_rng(cfg.seed)
    iu, ju = np.triu_indices(n, k=1)
    draws = rng.random(len(iu))
    prob = np.where(block[iu] == block[ju], cfg.p_in, cfg.p_out)
    hit = draws < prob
    names = [str(i) for i in range(n)]
    g = Graph.from_indexed(names, iu[hit], ju[hit], np.full(int(hit.sum()), float(cfg.w_in)))
    return g, Partition(names, block)


def inject_sporadic_noise(g: Graph, gt: Partition, rate: float, seed: int = 0) -> tuple[Graph, TemporalStream]:
    """Add ``ceil(rate * |E|)`` weight-1 edges between non-adjacent cross-community pairs.

    Also returns an interaction stream whose aggregation is the noisy graph:
    a genuine edge of weight ``w`` appears ``w`` times, a noise edge once, at
    shuffled timestamps. Genuine weights must be integers.

    Raises:
        ValueError: fewer than 2 communities, non-integer genuine weights, or
            not enough non-adjacent cross pairs for the requested noise.
    """
    if rate < 0:
        raise ValueError("noise rate must be >= 0")
    labels = gt.aligned(g.nodes).labels
    if int(labels.max()) + 1 < 2:
        raise ValueError("noise injection needs at least 2 ground-truth communities")
    if np.any(g.edge_w != np.round(g.edge_w)):
        raise ValueError("genuine edge weights must be integers to emit an interaction stream")
    rng = np.random.default_rng(seed)
    want = math.ceil(rate * g.edge_count)

    n = g.n
    iu, ju = np.triu_indices(n, k=1)
    existing = np.zeros((n, n), dtype=bool)
    existing[g.edge_u, g.edge_v] = True
    existing[g.edge_v, g.edge_u] = True
    free = (labels[iu] != labels[ju]) & ~existing[iu, ju]
    cand_u, cand_v = iu[free], ju[free]
    if want > len(cand_u):
        raise ValueError(f"requested {want} noise edges but only {len(cand_u)} cross pairs are free")
    pick = np.sort(rng.choice(len(cand_u), size=want, replace=False)) if want else np.array([], dtype=np.int64)
    nu, nv = cand_u[pick], cand_v[pick]

    noisy = Graph.from_indexed(
        g.nodes,
        np.concatenate([g.edge_u, nu]),
        np.concatenate([g.edge_v, nv]),
        np.concatenate([g.edge_w, np.ones(want)]),
    )
    pairs = []
    for a, b, w in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.edge_w.tolist()):
        pairs.extend([(a, b)] * int(w))
    pairs.extend(zip(nu.tolist(), nv.tolist()))
    times = rng.permutation(len(pairs))
    names = g.nodes
    stream = TemporalStream(tuple((names[a], names[b], int(t)) for (a, b), t in zip(pairs, times)))
    return noisy, stream
