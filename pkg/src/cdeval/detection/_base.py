from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..graph import Graph, Partition
from ..metrics.structural import modularity

ALGORITHMS = ("LM", "GM", "LE", "LP", "GN", "WT", "IM")
DETERMINISTIC = frozenset({"LM", "GM", "LE", "GN"})


class DetectionError(RuntimeError):
    def __init__(self, message: str, algorithm: str | None = None):
        self.algorithm = algorithm
        if algorithm:
            message = f"[{algorithm}] {message}"
        super().__init__(message)


class ConvergenceError(DetectionError):
    def __init__(self, message: str, algorithm: str | None = None, residual: float | None = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message, algorithm)


@dataclass(frozen=True)
class DetectionResult:
    """One algorithm run.

    ``objective`` is the modularity of ``partition`` for the modularity-based
    algorithms, the map-equation code length (bits) for IM and ``None`` for LP.
    ``trace`` holds per-phase or per-level objective values where the
    algorithm records them.
    """

    algorithm: str
    seed: int | None
    partition: Partition
    wall_time: float
    objective: float | None
    objective_name: str | None
    trace: tuple[float, ...] = ()
    info: dict = field(default_factory=dict, compare=False)


@dataclass
class Dendrogram:
    """Levels of an agglomerative or divisive process.

    Agglomerative dendrograms store merge events ``(a, b)`` over the previous
    level's labels and rebuild partitions by replay; divisive ones store the
    component labels of every recorded level.
    """

    nodes: tuple[str, ...]
    modularity: list[float]
    events: list[tuple] = field(default_factory=list)
    base_labels: np.ndarray | None = None
    level_labels: list[np.ndarray] | None = None

    def __len__(self):
        return len(self.modularity)

    def labels_at(self, level: int) -> np.ndarray:
        if self.level_labels is not None:
            return self.level_labels[level]
        labels = self.base_labels.copy()
        for a, b in self.events[:level]:
            labels[labels == b] = a
        return labels

    def partition_at(self, level: int) -> Partition:
        return Partition(self.nodes, self.labels_at(level))

    def best_level(self) -> int:
        """First level attaining the maximal recorded modularity."""
        return int(np.argmax(np.asarray(self.modularity)))


def require_edges(g: Graph, algorithm: str):
    if g.edge_count == 0 or g.total_weight <= 0:
        raise DetectionError("graph has no edges", algorithm)


def modularity_result(algorithm, seed, g, labels, elapsed, trace=(), info=None) -> DetectionResult:
    p = Partition(g.nodes, labels)
    return DetectionResult(
        algorithm=algorithm,
        seed=seed,
        partition=p,
        wall_time=elapsed,
        objective=modularity(g, p),
        objective_name="modularity",
        trace=tuple(trace),
        info=info or {},
    )
