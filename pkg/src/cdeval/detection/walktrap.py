"""Walktrap: agglomerative clustering on random-walk distances (Pons & Latapy 2005)."""

from __future__ import annotations

import heapq
import time

import numpy as np

from ..graph import Graph
from ._base import Dendrogram, modularity_result, require_edges

DEFAULT_STEPS = 4


def walktrap_dendrogram(g: Graph, t: int = DEFAULT_STEPS, seed: int = 0) -> Dendrogram:
    """Ward-style merging of adjacent communities on t-step walk distances.

    Communities are compared through ``D^{-1/2} P^t`` rows, so the squared
    distance between two rows is ``sum_k (P^t_ik - P^t_jk)^2 / d_k``. The
    pair with the smallest variance increase
    ``|C1||C2| / (|C1|+|C2|) * r^2 / n`` is merged. Exact ties fall back to
    seeded random community priorities.
    """
    require_edges(g, "WT")
    if t < 1:
        raise ValueError("walk length t must be >= 1")
    n = g.n
    rng = np.random.default_rng(seed)
    m = g.total_weight
    a = g.adjacency().toarray()
    d = g.strength()
    isolated = d == 0
    p = np.divide(a, d[:, None], out=np.zeros_like(a), where=~isolated[:, None])
    p[isolated, isolated] = 1.0
    pt = np.linalg.matrix_power(p, t)
    scale = np.divide(1.0, np.sqrt(d), out=np.zeros_like(d), where=~isolated)
    x = pt * scale[None, :]

    vec = {i: x[i] for i in range(n)}
    size = {i: 1 for i in range(n)}
    strength = {i: float(d[i]) for i in range(n)}
    label = {i: i for i in range(n)}
    prio = {i: float(r) for i, r in enumerate(rng.random(n))}
    between: dict[int, dict[int, float]] = {i: {} for i in range(n)}
    for u, v, w in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.edge_w.tolist()):
        between[u][v] = w
        between[v][u] = w

    def sigma(c1, c2):
        diff = vec[c1] - vec[c2]
        return size[c1] * size[c2] / (size[c1] + size[c2]) * float(diff @ diff) / n

    def entry(c1, c2):
        lo, hi = sorted((prio[c1], prio[c2]))
        return (sigma(c1, c2), lo, hi, min(c1, c2), max(c1, c2))

    heap = [entry(u, v) for u in range(n) for v in between[u] if u < v]
    heapq.heapify(heap)

    q = float(-np.sum((d / (2.0 * m)) ** 2))
    dendro = Dendrogram(g.nodes, [q], base_labels=np.arange(n, dtype=np.int64))
    next_id = n
    while heap:
        _, _, _, c1, c2 = heapq.heappop(heap)
        if c1 not in size or c2 not in size:
            continue
        w12 = between[c1].get(c2, 0.0)
        q += w12 / m - strength[c1] * strength[c2] / (2.0 * m * m)
        new = next_id
        next_id += 1
        total = size[c1] + size[c2]
        vec[new] = (size[c1] * vec[c1] + size[c2] * vec[c2]) / total
        size[new] = total
        strength[new] = strength[c1] + strength[c2]
        label[new] = label[c1]
        prio[new] = float(rng.random())
        merged: dict[int, float] = {}
        for old in (c1, c2):
            for nb, w in between.pop(old).items():
                if nb in (c1, c2):
                    continue
                merged[nb] = merged.get(nb, 0.0) + w
                del between[nb][old]
        between[new] = merged
        for nb, w in merged.items():
            between[nb][new] = w
        dendro.events.append((label[c1], label[c2]))
        dendro.modularity.append(q)
        for old in (c1, c2):
            del vec[old], size[old], strength[old]
        for nb in merged:
            heapq.heappush(heap, entry(new, nb))
    return dendro


def walktrap(g: Graph, t: int = DEFAULT_STEPS, seed: int = 0):
    start = time.perf_counter()
    dendro = walktrap_dendrogram(g, t, seed)
    best = dendro.best_level()
    return modularity_result(
        "WT", seed, g, dendro.labels_at(best), time.perf_counter() - start, dendro.modularity,
        {"level": best, "steps": t},
    )
