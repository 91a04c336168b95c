"""Coarse-grained graphs used by the multilevel optimizers (Louvain, Infomap)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph


@dataclass
class LevelGraph:
    """Weighted graph whose nodes may carry self-loop weight.

    ``loops[i]`` is the total intra weight collapsed into node ``i``;
    ``strength[i]`` counts it twice, matching the original graph's volume.
    """

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    loops: np.ndarray
    strength: np.ndarray

    @property
    def n(self) -> int:
        return len(self.strength)

    @classmethod
    def from_graph(cls, g: Graph) -> "LevelGraph":
        return cls(
            g.edge_u.copy(), g.edge_v.copy(), g.edge_w.copy(), np.zeros(g.n), g.strength().copy()
        )

    def csr(self):
        n = self.n
        rows = np.concatenate([self.u, self.v])
        cols = np.concatenate([self.v, self.u])
        vals = np.concatenate([self.w, self.w])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        return indptr, np.ascontiguousarray(cols, dtype=np.int64), np.ascontiguousarray(vals, dtype=np.float64)

    def collapse(self, comm: np.ndarray) -> "LevelGraph":
        """Merge nodes by dense community labels ``comm``."""
        k = int(comm.max()) + 1
        cu, cv = comm[self.u], comm[self.v]
        inside = cu == cv
        loops = np.bincount(comm, weights=self.loops, minlength=k)
        loops += np.bincount(cu[inside], weights=self.w[inside], minlength=k)
        a = np.minimum(cu[~inside], cv[~inside])
        b = np.maximum(cu[~inside], cv[~inside])
        keys, inv = np.unique(a * k + b, return_inverse=True)
        w = np.bincount(inv.reshape(-1), weights=self.w[~inside], minlength=len(keys))
        return LevelGraph(
            (keys // k).astype(np.int64),
            (keys % k).astype(np.int64),
            w.astype(np.float64),
            loops,
            np.bincount(comm, weights=self.strength, minlength=k),
        )


def dense_labels(comm: np.ndarray) -> np.ndarray:
    """Renumber labels to 0..k-1 in order of first appearance."""
    _, first, inv = np.unique(comm, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.reshape(-1)]
