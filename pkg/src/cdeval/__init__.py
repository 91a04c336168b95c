"""Community-detection evaluation by cross-checking structural and functional evidence."""

__version__ = "0.1.0"

from .graph import Graph, Partition, TemporalStream, load_edge_list, load_partition, load_temporal  # noqa: E402

__all__ = [
    "Graph",
    "Partition",
    "TemporalStream",
    "__version__",
    "load_edge_list",
    "load_partition",
    "load_temporal",
]
