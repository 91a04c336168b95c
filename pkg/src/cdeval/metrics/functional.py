"""Partition similarity: RI, ARI, NMI, VI and split-join distance.

All five share one contingency table. Entropies use natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..graph import Partition

NMI_NORMALIZATION = "arithmetic"
LOG_BASE = "e"


@dataclass(frozen=True)
class ContingencyTable:
    matrix: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    n: int


def contingency(p1: Partition, p2: Partition) -> ContingencyTable:
    if set(p1.nodes) != set(p2.nodes) or len(p1.nodes) != len(p2.nodes):
        diff = sorted(set(p1.nodes) ^ set(p2.nodes))
        raise ValueError(f"partitions cover different node sets; symmetric difference: {diff[:10]}")
    b = p2.aligned(p1.nodes).labels
    a = p1.labels
    r, c = int(a.max()) + 1, int(b.max()) + 1
    mat = np.bincount(a * c + b, minlength=r * c).reshape(r, c).astype(np.int64)
    return ContingencyTable(mat, mat.sum(axis=1), mat.sum(axis=0), int(a.size))


def _comb2(x) -> int:
    x = np.asarray(x, dtype=np.int64)
    return int(np.sum(x * (x - 1) // 2))


def _pair_counts(t: ContingencyTable):
    """Integer pair counts: (same in both, same in p1, same in p2, all pairs)."""
    return _comb2(t.matrix), _comb2(t.row_sums), _comb2(t.col_sums), t.n * (t.n - 1) // 2


def _ri(t: ContingencyTable) -> float:
    if t.n < 2:
        raise ValueError("pair-counting metrics need at least 2 nodes")
    both, same1, same2, total = _pair_counts(t)
    return (total + 2 * both - same1 - same2) / total


def _ari(t: ContingencyTable) -> float:
    if t.n < 2:
        raise ValueError("pair-counting metrics need at least 2 nodes")
    index, same1, same2, total = _pair_counts(t)
    # (index - expected) / (max - expected) scaled by 2 * total: integer
    # numerator and denominator, so the one true division rounds correctly
    num = 2 * total * index - 2 * same1 * same2
    den = total * (same1 + same2) - 2 * same1 * same2
    if den == 0:
        return 1.0 if num == 0 else 0.0
    return num / den


def _entropies(t: ContingencyTable):
    n = t.n
    a = t.row_sums[t.row_sums > 0]
    b = t.col_sums[t.col_sums > 0]
    h1 = -float(np.sum(a / n * np.log(a / n)))
    h2 = -float(np.sum(b / n * np.log(b / n)))
    return max(h1, 0.0), max(h2, 0.0)


def _nmi(t: ContingencyTable) -> float:
    # 2I/(H1+H2) written as 1 - VI/(H1+H2), exact 1 for identical partitions
    h1, h2 = _entropies(t)
    if h1 == 0.0 and h2 == 0.0:
        return 1.0
    if h1 == 0.0 or h2 == 0.0:
        return 0.0
    return min(1.0, max(0.0, 1.0 - _vi(t) / (h1 + h2)))


def _vi(t: ContingencyTable) -> float:
    """``H(1|2) + H(2|1)`` summed cell by cell; every term is non-negative."""
    rows, cols = np.nonzero(t.matrix)
    nz = t.matrix[rows, cols].astype(float)
    terms = np.log(t.row_sums[rows] / nz) + np.log(t.col_sums[cols] / nz)
    return float(np.sum(nz / t.n * terms))


def _vi_star(vi: float, n: int) -> float:
    if n < 2:
        return 1.0
    return min(1.0, max(0.0, 1.0 - vi / math.log(n)))


def _sjd(t: ContingencyTable) -> int:
    return int(2 * t.n - t.matrix.max(axis=1).sum() - t.matrix.max(axis=0).sum())


def rand_index(p1: Partition, p2: Partition) -> float:
    """Fraction of node pairs on which the partitions agree."""
    return _ri(contingency(p1, p2))


def adjusted_rand_index(p1: Partition, p2: Partition) -> float:
    """Permutation-model ARI; 1.0 (identical) or 0.0 when max equals expected."""
    return _ari(contingency(p1, p2))


def nmi(p1: Partition, p2: Partition) -> float:
    """``2 I / (H1 + H2)``; 1 when both entropies vanish, 0 when exactly one does."""
    return _nmi(contingency(p1, p2))


def variation_of_information(p1: Partition, p2: Partition) -> float:
    return _vi(contingency(p1, p2))


def split_join_distance(p1: Partition, p2: Partition) -> int:
    return _sjd(contingency(p1, p2))


def vi_similarity(p1: Partition, p2: Partition) -> float:
    """``1 - VI / ln n``, in [0, 1]; a single node counts as identical."""
    return _vi_star(variation_of_information(p1, p2), p1.n)


def sjd_similarity(p1: Partition, p2: Partition) -> float:
    """``1 - SJD / 2n``, in [0, 1]."""
    return 1.0 - split_join_distance(p1, p2) / (2.0 * p1.n)


# similarity-oriented: higher means more alike; all in [0, 1] except ARI (-1, 1]
SIMILARITY_METRICS = ("RI", "ARI", "NMI", "VI*", "SJD*")


def similarity_scores(p1: Partition, p2: Partition, metrics=SIMILARITY_METRICS) -> dict[str, float]:
    """Requested similarity scores computed from a single contingency table."""
    unknown = set(metrics) - set(SIMILARITY_METRICS)
    if unknown:
        raise ValueError(f"unknown similarity metrics {sorted(unknown)}")
    t = contingency(p1, p2)
    out = {}
    if "RI" in metrics:
        out["RI"] = _ri(t)
    if "ARI" in metrics:
        out["ARI"] = _ari(t)
    if "NMI" in metrics:
        out["NMI"] = _nmi(t)
    if "VI*" in metrics:
        out["VI*"] = _vi_star(_vi(t), t.n)
    if "SJD*" in metrics:
        out["SJD*"] = 1.0 - _sjd(t) / (2.0 * t.n)
    return {k: out[k] for k in metrics}
