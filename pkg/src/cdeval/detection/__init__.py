"""Community detection algorithms and replicated suite execution."""

from ._base import (
    ALGORITHMS,
    DETERMINISTIC,
    ConvergenceError,
    Dendrogram,
    DetectionError,
    DetectionResult,
)
from .eigenvector import leading_eigenvector
from .girvan_newman import edge_betweenness, girvan_newman, girvan_newman_dendrogram
from .greedy import greedy_dendrogram, greedy_modularity
from .infomap import infomap, map_equation
from .labelprop import label_propagation
from .louvain import louvain
from .suite import DetectionConfig, run_algorithm, run_suite
from .walktrap import walktrap, walktrap_dendrogram

__all__ = [
    "ALGORITHMS",
    "DETERMINISTIC",
    "ConvergenceError",
    "Dendrogram",
    "DetectionConfig",
    "DetectionError",
    "DetectionResult",
    "edge_betweenness",
    "girvan_newman",
    "girvan_newman_dendrogram",
    "greedy_dendrogram",
    "greedy_modularity",
    "infomap",
    "label_propagation",
    "leading_eigenvector",
    "louvain",
    "map_equation",
    "run_algorithm",
    "run_suite",
    "walktrap",
    "walktrap_dendrogram",
]
