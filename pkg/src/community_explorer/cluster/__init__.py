"""
Clustering primitives: Lloyd k-means, weighted Ward agglomeration, k selection.
"""

from community_explorer.cluster.kmeans import kmeans, two_means, within_ss
from community_explorer.cluster.models import (
    Dendrogram,
    KMeansOptions,
    KMeansResult,
    Merge,
    Partition,
    SelectionResult,
)
from community_explorer.cluster.selection import elbow_select_k, gap_select_k, knee_index
from community_explorer.cluster.ward import ward_agglomerate, ward_cost

__all__ = [
    "Dendrogram",
    "KMeansOptions",
    "KMeansResult",
    "Merge",
    "Partition",
    "SelectionResult",
    "elbow_select_k",
    "gap_select_k",
    "kmeans",
    "knee_index",
    "two_means",
    "ward_agglomerate",
    "ward_cost",
    "within_ss",
]
