"""Graph, partition and temporal-stream types plus their text formats.

Node identifiers are strings on the outside and dense integer indices on the
inside. The index of a node is its first-appearance position in the input,
so a graph loaded twice from the same text is indexed identically.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class FormatError(ValueError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _read_text(source) -> str:
    """Accept raw text, a path, or an open text file."""
    if isinstance(source, (os.PathLike,)):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    if isinstance(source, io.TextIOBase):
        return source.read()
    return source


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


class Graph:
    """Undirected, weighted, simple graph. Immutable after construction.

    Edges are stored once each as ``(u, v, w)`` index triples with ``u < v``,
    sorted lexicographically.
    """

    __slots__ = ("nodes", "index", "edge_u", "edge_v", "edge_w", "_csr", "_csr_ids", "_strength", "_degree")

    def __init__(self, nodes: Sequence[str], edges: Iterable[tuple[str, str, float]] = ()):
        self.nodes: tuple[str, ...] = tuple(nodes)
        self.index: dict[str, int] = {name: i for i, name in enumerate(self.nodes)}
        if len(self.index) != len(self.nodes):
            raise ValueError("duplicate node identifiers")

        acc: dict[tuple[int, int], float] = {}
        for a, b, w in edges:
            if a not in self.index or b not in self.index:
                raise ValueError(f"edge ({a}, {b}) references an undeclared node")
            if a == b:
                raise ValueError(f"self-loop on node {a}")
            if not w > 0 or not math.isfinite(w):
                raise ValueError(f"edge ({a}, {b}) has non-positive weight {w}")
            i, j = self.index[a], self.index[b]
            key = (i, j) if i < j else (j, i)
            acc[key] = acc.get(key, 0.0) + float(w)

        keys = sorted(acc)
        self.edge_u = np.array([k[0] for k in keys], dtype=np.int64)
        self.edge_v = np.array([k[1] for k in keys], dtype=np.int64)
        self.edge_w = np.array([acc[k] for k in keys], dtype=np.float64)
        for arr in (self.edge_u, self.edge_v, self.edge_w):
            arr.setflags(write=False)
        self._csr = None
        self._csr_ids = None
        self._strength = None
        self._degree = None

    @classmethod
    def from_indexed(cls, nodes, u, v, w) -> "Graph":
        names = tuple(nodes)
        return cls(names, ((names[a], names[b], c) for a, b, c in zip(u, v, w)))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count}, weight={self.total_weight:g})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and np.array_equal(self.edge_u, other.edge_u)
            and np.array_equal(self.edge_v, other.edge_v)
            and np.array_equal(self.edge_w, other.edge_w)
        )

    __hash__ = None

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edge_u)

    @property
    def total_weight(self) -> float:
        return float(self.edge_w.sum())

    @property
    def is_weighted(self) -> bool:
        return bool(np.any(self.edge_w != 1.0))

    def edges(self):
        """Yield ``(u_name, v_name, weight)`` triples in index order."""
        for a, b, w in zip(self.edge_u.tolist(), self.edge_v.tolist(), self.edge_w.tolist()):
            yield self.nodes[a], self.nodes[b], w

    def edge_set(self) -> set[frozenset]:
        return {frozenset((a, b)) for a, b, _ in self.edges()}

    def csr(self):
        """Symmetric CSR arrays ``(indptr, indices, weights)``; neighbors sorted by index."""
        if self._csr is None:
            n = self.n
            rows = np.concatenate([self.edge_u, self.edge_v])
            cols = np.concatenate([self.edge_v, self.edge_u])
            vals = np.concatenate([self.edge_w, self.edge_w])
            ids = np.concatenate([np.arange(self.edge_count)] * 2)
            order = np.lexsort((cols, rows))
            rows, cols, vals = rows[order], cols[order], vals[order]
            self._csr_ids = ids[order].astype(np.int64)
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(indptr, rows + 1, 1)
            np.cumsum(indptr, out=indptr)
            self._csr = (indptr, cols.astype(np.int64), vals.astype(np.float64))
        return self._csr

    def csr_edge_ids(self) -> np.ndarray:
        """Edge index of every CSR slot, aligned with ``csr()[1]``."""
        self.csr()
        return self._csr_ids

    def adjacency(self) -> sparse.csr_matrix:
        indptr, indices, weights = self.csr()
        return sparse.csr_matrix((weights, indices, indptr), shape=(self.n, self.n))

    def strength(self) -> np.ndarray:
        if self._strength is None:
            s = np.zeros(self.n)
            np.add.at(s, self.edge_u, self.edge_w)
            np.add.at(s, self.edge_v, self.edge_w)
            self._strength = s
        return self._strength

    def degree(self) -> np.ndarray:
        if self._degree is None:
            self._degree = np.diff(self.csr()[0])
        return self._degree

    def neighbors(self, i: int) -> np.ndarray:
        indptr, indices, _ = self.csr()
        return indices[indptr[i]:indptr[i + 1]]

    def binarized(self) -> "Graph":
        """Same topology with every weight set to 1."""
        return Graph.from_indexed(self.nodes, self.edge_u, self.edge_v, np.ones(self.edge_count))

    def subgraph(self, keep: Iterable[str]) -> "Graph":
        """Induced subgraph; node order follows this graph's order."""
        keep = set(keep)
        names = [v for v in self.nodes if v in keep]
        return Graph(names, ((a, b, w) for a, b, w in self.edges() if a in keep and b in keep))

    def without_isolated(self) -> "Graph":
        deg = self.degree()
        return self.subgraph(v for v, d in zip(self.nodes, deg) if d > 0)


class Partition:
    """Total assignment of nodes to disjoint communities.

    Labels are renumbered on construction to ``0..C-1`` in order of first
    appearance along ``nodes``, so two assignment-equal partitions over the
    same node order compare equal.
    """

    __slots__ = ("nodes", "labels", "_index")

    def __init__(self, nodes: Sequence[str], labels):
        self.nodes = tuple(nodes)
        labels = np.asarray(labels)
        if labels.shape != (len(self.nodes),):
            raise ValueError("labels must have one entry per node")
        if len(self.nodes) == 0:
            raise ValueError("a partition needs at least one node")
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        self.labels = rank[inverse.reshape(-1)].astype(np.int64)
        self.labels.setflags(write=False)
        self._index = None

    @classmethod
    def from_communities(cls, nodes: Sequence[str], communities: Iterable[Iterable[str]]) -> "Partition":
        label = {}
        for c, members in enumerate(communities):
            for v in members:
                if v in label:
                    raise ValueError(f"node {v} assigned twice")
                label[v] = c
        missing = [v for v in nodes if v not in label]
        if missing:
            raise ValueError(f"nodes without a community: {missing[:5]}")
        return cls(nodes, [label[v] for v in nodes])

    @classmethod
    def singletons(cls, nodes) -> "Partition":
        return cls(nodes, np.arange(len(nodes)))

    @classmethod
    def whole(cls, nodes) -> "Partition":
        return cls(nodes, np.zeros(len(nodes), dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def community_count(self) -> int:
        return int(self.labels.max()) + 1

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.community_count)

    def communities(self) -> list[list[str]]:
        out = [[] for _ in range(self.community_count)]
        for v, c in zip(self.nodes, self.labels.tolist()):
            out[c].append(v)
        return out

    def label_of(self, node: str) -> int:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.nodes)}
        return int(self.labels[self._index[node]])

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.nodes, self.labels.tolist()))

    def restrict(self, keep: Iterable[str]) -> "Partition":
        """Partition induced on a node subset, keeping this partition's node order."""
        keep = set(keep)
        idx = [i for i, v in enumerate(self.nodes) if v in keep]
        if len(idx) != len(keep):
            raise ValueError("restriction set contains nodes outside the partition")
        return Partition([self.nodes[i] for i in idx], self.labels[idx])

    def aligned(self, nodes: Sequence[str]) -> "Partition":
        """Same assignment re-expressed over ``nodes`` order (must be the same set)."""
        if tuple(nodes) == self.nodes:
            return self
        if set(nodes) != set(self.nodes):
            raise ValueError("node sets differ")
        return Partition(nodes, [self.label_of(v) for v in nodes])

    def same_assignment(self, other: "Partition") -> bool:
        if set(self.nodes) != set(other.nodes):
            return False
        return bool(np.array_equal(self.labels, other.aligned(self.nodes).labels))

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.nodes == other.nodes and np.array_equal(self.labels, other.labels)

    __hash__ = None

    def __repr__(self):
        return f"Partition(n={self.n}, communities={self.community_count})"


@dataclass(frozen=True)
class TemporalStream:
    """Timestamped pairwise interactions, kept sorted by ``(t, u, v)``."""

    events: tuple[tuple[str, str, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        checked = []
        for u, v, t in self.events:
            if u == v:
                raise ValueError(f"self-interaction on node {u}")
            t = int(t)
            if t < 0:
                raise ValueError(f"negative timestamp {t}")
            checked.append((str(u), str(v), t))
        checked.sort(key=lambda e: (e[2], e[0], e[1]))
        object.__setattr__(self, "events", tuple(checked))

    def __len__(self):
        return len(self.events)

    def pair_counts(self) -> tuple[list[str], dict[tuple[str, str], int]]:
        """Node order of first appearance, and interaction count per unordered pair."""
        order: dict[str, None] = {}
        counts: dict[tuple[str, str], int] = {}
        for u, v, _ in self.events:
            order.setdefault(u)
            order.setdefault(v)
            key = (u, v) if u < v else (v, u)
            counts[key] = counts.get(key, 0) + 1
        return list(order), counts


@dataclass(frozen=True)
class NetworkStats:
    node_count: int
    edge_count: int
    max_degree: int
    min_degree: int
    density: float
    global_clustering_coefficient: float
    component_count: int


def load_edge_list(source) -> Graph:
    """Parse a whitespace edge list.

    Lines are ``u v`` or ``u v w``; a lone ``u`` declares an isolated node.
    Repeated pairs accumulate their weights.
    """
    text = _read_text(source)
    nodes: dict[str, None] = {}
    edges = []
    for lineno, tok in _content_lines(text):
        if len(tok) == 1:
            nodes.setdefault(tok[0])
            continue
        if len(tok) > 3:
            raise FormatError(f"expected 'u v [w]', got {len(tok)} fields", lineno)
        u, v = tok[0], tok[1]
        if u == v:
            raise FormatError(f"self-loop on node {u}", lineno)
        w = 1.0
        if len(tok) == 3:
            try:
                w = float(tok[2])
            except ValueError:
                raise FormatError(f"weight {tok[2]!r} is not a number", lineno) from None
            if not (w > 0 and math.isfinite(w)):
                raise FormatError(f"weight must be positive, got {tok[2]}", lineno)
        nodes.setdefault(u)
        nodes.setdefault(v)
        edges.append((u, v, w))
    return Graph(list(nodes), edges)


def save_edge_list(g: Graph) -> str:
    lines = []
    touched = set()
    for a, b, w in g.edges():
        touched.update((a, b))
        lines.append(f"{a} {b}" if w == 1.0 else f"{a} {b} {w:.17g}")
    lines.extend(v for v in g.nodes if v not in touched)
    return "\n".join(lines) + "\n"


def load_temporal(source) -> TemporalStream:
    """Parse ``u v t`` lines into a stream."""
    text = _read_text(source)
    events = []
    for lineno, tok in _content_lines(text):
        if len(tok) != 3:
            raise FormatError(f"expected 'u v t', got {len(tok)} fields", lineno)
        u, v, t = tok
        if u == v:
            raise FormatError(f"self-interaction on node {u}", lineno)
        try:
            ts = int(t)
        except ValueError:
            raise FormatError(f"timestamp {t!r} is not an integer", lineno) from None
        if ts < 0:
            raise FormatError(f"negative timestamp {ts}", lineno)
        events.append((u, v, ts))
    return TemporalStream(tuple(events))


def save_temporal(stream: TemporalStream) -> str:
    return "".join(f"{u} {v} {t}\n" for u, v, t in stream.events)


def aggregate_temporal(stream: TemporalStream) -> Graph:
    """Aggregate edge graph: one edge per interacting pair, weight = interaction count."""
    if len(stream) == 0:
        raise ValueError("cannot aggregate an empty stream")
    order, counts = stream.pair_counts()
    return Graph(order, ((u, v, float(c)) for (u, v), c in counts.items()))


def load_partition(source, graph: Graph | None = None) -> Partition:
    """Parse ``node label`` lines.

    With ``graph`` bound, every graph node must appear exactly once and the
    result follows the graph's node order.
    """
    text = _read_text(source)
    assign: dict[str, str] = {}
    for lineno, tok in _content_lines(text):
        if len(tok) != 2:
            raise FormatError(f"expected 'node label', got {len(tok)} fields", lineno)
        node, label = tok
        if node in assign:
            raise FormatError(f"node {node} assigned twice", lineno)
        assign[node] = label
    if not assign:
        raise FormatError("partition file has no assignments")
    if graph is None:
        nodes = list(assign)
    else:
        extra = [v for v in assign if v not in graph.index]
        if extra:
            raise ValueError(f"partition names nodes missing from the graph: {extra[:5]}")
        missing = [v for v in graph.nodes if v not in assign]
        if missing:
            raise ValueError(f"graph nodes without a community: {missing[:5]}")
        nodes = list(graph.nodes)
    return Partition(nodes, [assign[v] for v in nodes])


def save_partition(p: Partition) -> str:
    return "".join(f"{v} {c}\n" for v, c in zip(p.nodes, p.labels.tolist()))


def connected_components(g: Graph) -> Partition:
    if g.n == 0:
        raise ValueError("empty graph")
    _, labels = csgraph.connected_components(g.adjacency(), directed=False)
    return Partition(g.nodes, labels)


def network_stats(g: Graph) -> NetworkStats:
    n = g.n
    if n < 2:
        raise ValueError("network statistics need at least 2 nodes")
    deg = g.degree()
    m = g.edge_count
    a = g.adjacency().copy()
    a.data[:] = 1.0
    triangles = (a @ a).multiply(a).sum() / 6.0
    triples = float(np.sum(deg * (deg - 1)) / 2.0)
    cc = 3.0 * triangles / triples if triples > 0 else 0.0
    return NetworkStats(
        node_count=n,
        edge_count=m,
        max_degree=int(deg.max()),
        min_degree=int(deg.min()),
        density=2.0 * m / (n * (n - 1)),
        global_clustering_coefficient=float(cc),
        component_count=connected_components(g).community_count,
    )
