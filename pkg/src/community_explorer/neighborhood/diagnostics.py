"""
Radius and k diagnostics: disk-occupancy and k-th neighbour distance histograms,
and automatic radius selection from a target median occupancy.
"""

import logging
from typing import Optional

import numpy as np

from community_explorer.data.models import Dataset
from community_explorer.errors import ScopeTooSmall
from community_explorer.neighborhood.composition import (
    disk_composition,
    kth_neighbor_distances,
)
from community_explorer.neighborhood.index import SpatialIndex, suggest_bucket_size
from community_explorer.neighborhood.models import (
    DiskConfig,
    Histogram,
    NeighborhoodDiagnostics,
    ScopeMode,
)
from community_explorer.seeding import derive_rng

logger = logging.getLogger(__name__)


def diagnostics(
    dataset: Dataset,
    r: float,
    k: int = 10,
    *,
    boundary_margin: Optional[float] = None,
    min_cells: int = 1,
    scope_mode: ScopeMode = ScopeMode.GLOBAL,
    bins: int = 30,
) -> NeighborhoodDiagnostics:
    """Histograms of disk occupancy n_i and of the k-th neighbour distance.

    Args:
        dataset: Cells
        r: Disk radius
        k: Neighbour rank for the distance histogram
        boundary_margin: Disk boundary margin (None: r / 2)
        min_cells: Disk occupancy threshold
        scope_mode: Scope of the spatial index
        bins: Number of histogram bins

    Returns:
        NeighborhoodDiagnostics; disk counts cover retained centers, distances
        cover every cell
    """
    cfg = DiskConfig(r=r, boundary_margin=boundary_margin, min_cells=min_cells, scope_mode=scope_mode)
    occupancy = disk_composition(dataset, cfg).counts
    distances = kth_neighbor_distances(dataset, k, cfg.scope_mode)
    return NeighborhoodDiagnostics(
        disk_counts=Histogram.of(occupancy, bins),
        kth_distances=Histogram.of(distances, bins),
        max_kth_distance=float(distances.max()),
        r=float(r),
        k=k,
        median_disk_count=float(np.median(occupancy)),
    )


def auto_radius(
    dataset: Dataset,
    target_occupancy: int = 40,
    *,
    sample_size: int = 2000,
    seed: int = 0,
    scope_mode: ScopeMode = ScopeMode.GLOBAL,
) -> float:
    """Radius whose median disk occupancy (center included) is ``target_occupancy``.

    A disk of radius d around a center holds at least t cells exactly when d
    reaches the distance to its (t - 1)-th nearest other cell, so the median of
    that distance over a seeded sample of centers is the estimate.

    Args:
        dataset: Cells
        target_occupancy: Desired median n_i (>= 2)
        sample_size: Number of sampled centers
        seed: Top-level seed
        scope_mode: Scope of the spatial index

    Returns:
        Radius r > 0

    Raises:
        ScopeTooSmall: No scope holds target_occupancy cells
    """
    if target_occupancy < 2:
        raise ValueError(f"target_occupancy must be >= 2, got {target_occupancy}")
    k = target_occupancy - 1
    rng = derive_rng(seed, "neighborhood", "auto_radius")
    chosen = np.zeros(dataset.n, dtype=bool)
    chosen[rng.choice(dataset.n, size=min(sample_size, dataset.n), replace=False)] = True
    ranks = dataset.id_ranks()

    distances = []
    for key, members in dataset.scopes(ScopeMode.parse(scope_mode) is ScopeMode.PER_FOV):
        local = np.flatnonzero(chosen[members])
        if members.size <= k or local.size == 0:
            continue
        x, y = dataset.x[members], dataset.y[members]
        index = SpatialIndex(x, y, suggest_bucket_size(x, y, k + 1), ids=members)
        _, kth = index.knn(k, ranks[members], centers=local)
        distances.append(kth)
    if not distances:
        raise ScopeTooSmall(
            f"No scope holds more than {k} cells; cannot target occupancy {target_occupancy}",
            {"target_occupancy": target_occupancy},
        )

    values = np.concatenate(distances)
    r = float(np.median(values))
    if r <= 0:
        r = float(values.max()) or 1.0
    logger.info(f"Auto radius r={r:.4g} for median occupancy {target_occupancy}")
    return r
