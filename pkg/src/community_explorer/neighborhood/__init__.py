"""
Neighbourhood module: grid spatial index, disk and kNN compositions, diagnostics.

- index: SpatialIndex, build_index
- composition: disk_composition, knn_composition, kth_neighbor_distances
- diagnostics: diagnostics, auto_radius
"""

from community_explorer.neighborhood.composition import (
    disk_composition,
    knn_composition,
    kth_neighbor_distances,
)
from community_explorer.neighborhood.diagnostics import auto_radius, diagnostics
from community_explorer.neighborhood.index import SpatialIndex, build_index
from community_explorer.neighborhood.models import (
    CompositionMatrix,
    DiskConfig,
    Histogram,
    KnnConfig,
    NeighborhoodDiagnostics,
    ScopeMode,
)

__all__ = [
    "CompositionMatrix",
    "DiskConfig",
    "Histogram",
    "KnnConfig",
    "NeighborhoodDiagnostics",
    "ScopeMode",
    "SpatialIndex",
    "auto_radius",
    "build_index",
    "diagnostics",
    "disk_composition",
    "knn_composition",
    "kth_neighbor_distances",
]
