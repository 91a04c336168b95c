from .functional import (
    SIMILARITY_METRICS,
    ContingencyTable,
    adjusted_rand_index,
    contingency,
    nmi,
    rand_index,
    similarity_scores,
    sjd_similarity,
    split_join_distance,
    variation_of_information,
    vi_similarity,
)
from .structural import (
    StructuralEvidence,
    conductance_profile,
    internal_density,
    modularity,
    partition_stats,
    structural_evidence,
)

__all__ = [
    "SIMILARITY_METRICS",
    "ContingencyTable",
    "StructuralEvidence",
    "adjusted_rand_index",
    "conductance_profile",
    "contingency",
    "internal_density",
    "modularity",
    "nmi",
    "partition_stats",
    "rand_index",
    "similarity_scores",
    "sjd_similarity",
    "split_join_distance",
    "structural_evidence",
    "variation_of_information",
    "vi_similarity",
]
