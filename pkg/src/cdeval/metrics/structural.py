"""Structural quality of a partition: modularity, conductance, density, size statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csgraph

from ..graph import Graph, Partition


@dataclass(frozen=True)
class ConductanceProfile:
    per_community: tuple[float, ...]
    mean: float
    min: float
    max: float


@dataclass(frozen=True)
class DensityProfile:
    per_community: tuple[float, ...]
    mean: float
    singleton_flags: tuple[bool, ...]


@dataclass(frozen=True)
class PartitionStats:
    community_count: int
    size_min: int
    size_max: int
    size_mean: float
    size_variance: float
    multicomponent_community_count: int


@dataclass(frozen=True)
class StructuralEvidence:
    modularity: float
    conductance_mean: float
    conductance_min: float
    conductance_max: float
    density_mean: float
    community_count: int
    size_min: int
    size_max: int
    size_mean: float
    size_variance: float
    multicomponent_community_count: int


def _labels_for(g: Graph, p: Partition) -> np.ndarray:
    if p.nodes == g.nodes:
        return p.labels
    if len(p.nodes) != g.n or set(p.nodes) != set(g.nodes):
        raise ValueError("partition does not cover exactly the graph's nodes")
    return p.aligned(g.nodes).labels


def _community_sums(g: Graph, labels: np.ndarray):
    """Per-community intra weight, strength sum and intra edge count."""
    c = int(labels.max()) + 1
    lu, lv = labels[g.edge_u], labels[g.edge_v]
    same = lu == lv
    intra_w = np.bincount(lu[same], weights=g.edge_w[same], minlength=c)
    intra_e = np.bincount(lu[same], minlength=c)
    strength = np.bincount(labels, weights=g.strength(), minlength=c)
    return intra_w, strength, intra_e


def modularity(g: Graph, p: Partition) -> float:
    """Weighted Newman-Girvan modularity."""
    m = g.total_weight
    if m <= 0:
        raise ValueError("modularity is undefined on a graph without edges")
    labels = _labels_for(g, p)
    intra_w, strength, _ = _community_sums(g, labels)
    return float(np.sum(intra_w / m - (strength / (2.0 * m)) ** 2))


def conductance_profile(g: Graph, p: Partition) -> ConductanceProfile:
    """cut(S) / min(vol(S), 2m - vol(S)) per community; 0 when the denominator is 0."""
    labels = _labels_for(g, p)
    intra_w, vol, _ = _community_sums(g, labels)
    cut = vol - 2.0 * intra_w
    denom = np.minimum(vol, 2.0 * g.total_weight - vol)
    phi = np.zeros(len(vol))
    ok = denom > 0
    phi[ok] = cut[ok] / denom[ok]
    phi = np.clip(phi, 0.0, 1.0)
    return ConductanceProfile(tuple(phi.tolist()), float(phi.mean()), float(phi.min()), float(phi.max()))


def internal_density(g: Graph, p: Partition) -> DensityProfile:
    """Unweighted intra-edge density; singleton communities score 1.0 and are flagged."""
    labels = _labels_for(g, p)
    _, _, intra_e = _community_sums(g, labels)
    sizes = np.bincount(labels)
    singleton = sizes < 2
    possible = sizes * (sizes - 1) / 2.0
    dens = np.ones(len(sizes))
    dens[~singleton] = intra_e[~singleton] / possible[~singleton]
    return DensityProfile(tuple(dens.tolist()), float(dens.mean()), tuple(singleton.tolist()))


def partition_stats(g: Graph, p: Partition) -> PartitionStats:
    labels = _labels_for(g, p)
    sizes = np.bincount(labels)
    adj = g.adjacency()
    multi = 0
    for c in range(len(sizes)):
        if sizes[c] < 2:
            continue
        members = np.flatnonzero(labels == c)
        k, _ = csgraph.connected_components(adj[members][:, members], directed=False)
        multi += k > 1
    return PartitionStats(
        community_count=len(sizes),
        size_min=int(sizes.min()),
        size_max=int(sizes.max()),
        size_mean=float(sizes.mean()),
        size_variance=float(sizes.var()),
        multicomponent_community_count=int(multi),
    )


def structural_evidence(g: Graph, p: Partition) -> StructuralEvidence:
    cond = conductance_profile(g, p)
    dens = internal_density(g, p)
    st = partition_stats(g, p)
    return StructuralEvidence(
        modularity=modularity(g, p),
        conductance_mean=cond.mean,
        conductance_min=cond.min,
        conductance_max=cond.max,
        density_mean=dens.mean,
        community_count=st.community_count,
        size_min=st.size_min,
        size_max=st.size_max,
        size_mean=st.size_mean,
        size_variance=st.size_variance,
        multicomponent_community_count=st.multicomponent_community_count,
    )
