"""
Disk and kNN compositional matrices.

Each scope (a sample, or a sample's FOV) gets its own spatial index, so no
neighbourhood ever reaches across scopes. Rows come out ordered by
(sample, fov, cell_id) regardless of how buckets are visited.
"""

import logging
from typing import List, Tuple

import numpy as np
from codetiming import Timer

from community_explorer.data.models import Dataset
from community_explorer.errors import NoRowsRetained, ScopeTooSmall
from community_explorer.neighborhood.index import SpatialIndex, suggest_bucket_size
from community_explorer.neighborhood.models import (
    CompositionMatrix,
    DiskConfig,
    KnnConfig,
    ScopeMode,
)

logger = logging.getLogger(__name__)


def _interior_mask(x: np.ndarray, y: np.ndarray, margin: float) -> np.ndarray:
    """Cells at least ``margin`` away from every edge of the scope's bounding box."""
    if margin <= 0:
        return np.ones(x.size, dtype=bool)
    return (
        (x - x.min() >= margin)
        & (x.max() - x >= margin)
        & (y - y.min() >= margin)
        & (y.max() - y >= margin)
    )


def _assemble(
    dataset: Dataset,
    centers: List[np.ndarray],
    counts: List[np.ndarray],
    totals: List[np.ndarray],
    variant: str,
    parameter: float,
) -> CompositionMatrix:
    idx = np.concatenate(centers) if centers else np.empty(0, dtype=np.int64)
    type_counts = (
        np.vstack(counts) if counts else np.empty((0, dataset.m), dtype=np.int64)
    )
    n_i = np.concatenate(totals) if totals else np.empty(0, dtype=np.int64)
    order = np.argsort(dataset.row_ranks()[idx], kind="stable")
    idx, type_counts, n_i = idx[order], type_counts[order], n_i[order]
    rows = type_counts / np.maximum(n_i, 1)[:, None]
    return CompositionMatrix(
        rows=rows,
        row_cells=dataset.cell_ids[idx],
        counts=n_i,
        registry=dataset.registry,
        row_samples=dataset.sample_ids[idx],
        row_fovs=None if dataset.fov_ids is None else dataset.fov_ids[idx],
        variant=variant,
        parameter=parameter,
    )


def disk_scope_counts(
    dataset: Dataset, members: np.ndarray, cfg: DiskConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """Disk counts for the interior centers of one scope.

    Args:
        dataset: Source dataset
        members: Dataset positions of the scope's cells, in cell_id order
        cfg: Disk configuration

    Returns:
        (center positions in the dataset, (n_centers, m) type counts)
    """
    x, y = dataset.x[members], dataset.y[members]
    interior = np.flatnonzero(_interior_mask(x, y, cfg.margin))
    if interior.size == 0:
        return members[:0], np.empty((0, dataset.m), dtype=np.int64)
    index = SpatialIndex(x, y, bucket_size=cfg.r, ids=members)
    counts = index.count_within(interior, cfg.r, dataset.cell_types[members], dataset.m)
    return members[interior], counts


def disk_composition(dataset: Dataset, cfg: DiskConfig) -> CompositionMatrix:
    """Disk compositional matrix.

    A center is kept when its distance to each edge of its scope's bounding box
    is at least the boundary margin and its disk holds at least ``min_cells``
    cells. The center counts itself.

    Args:
        dataset: Cells to compose
        cfg: Radius, margin, occupancy threshold and scope mode

    Returns:
        CompositionMatrix with one row per retained center

    Raises:
        NoRowsRetained: Every center was excluded
        ValueError: per_fov scope on data without FOVs
    """
    centers, counts, totals = [], [], []
    per_fov = cfg.scope_mode is ScopeMode.PER_FOV
    with Timer(name="disk_composition", text="Disk composition built in {:.2f}s", logger=logger.info):
        for key, members in dataset.scopes(per_fov):
            idx, type_counts = disk_scope_counts(dataset, members, cfg)
            n_i = type_counts.sum(axis=1)
            keep = n_i >= cfg.min_cells
            centers.append(idx[keep])
            counts.append(type_counts[keep])
            totals.append(n_i[keep])
            logger.debug(f"Scope {key}: {int(keep.sum()):,} of {members.size:,} centers kept")

    retained = sum(len(c) for c in centers)
    if retained == 0:
        raise NoRowsRetained(
            f"No disk kept at r={cfg.r:g}, margin={cfg.margin:g}, min_cells={cfg.min_cells}",
            {"r": cfg.r, "boundary_margin": cfg.margin, "min_cells": cfg.min_cells},
        )
    logger.info(f"Disk composition: N_D={retained:,} of N={dataset.n:,} (r={cfg.r:g})")
    return _assemble(dataset, centers, counts, totals, "disk", cfg.r)


def _knn_scope(
    dataset: Dataset, members: np.ndarray, k: int, ranks: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    x, y = dataset.x[members], dataset.y[members]
    index = SpatialIndex(x, y, bucket_size=suggest_bucket_size(x, y, k + 1), ids=members)
    return index.knn(k, ranks[members])


def knn_composition(dataset: Dataset, cfg: KnnConfig) -> CompositionMatrix:
    """kNN compositional matrix: one row per cell, from its k nearest other cells.

    Distance ties are broken by ascending cell_id.

    Raises:
        ScopeTooSmall: A scope holds k or fewer cells
    """
    ranks = dataset.id_ranks()
    centers, counts, totals = [], [], []
    per_fov = cfg.scope_mode is ScopeMode.PER_FOV
    with Timer(name="knn_composition", text="kNN composition built in {:.2f}s", logger=logger.info):
        for key, members in dataset.scopes(per_fov):
            if members.size <= cfg.k:
                raise ScopeTooSmall(
                    f"Scope {key} has {members.size} cells, kNN needs more than k={cfg.k}",
                    {"scope": list(key), "size": int(members.size), "k": cfg.k},
                )
            neighbours, _ = _knn_scope(dataset, members, cfg.k, ranks)
            types = dataset.cell_types[members][neighbours]
            type_counts = np.zeros((members.size, dataset.m), dtype=np.int64)
            np.add.at(type_counts, (np.repeat(np.arange(members.size), cfg.k), types.ravel()), 1)
            centers.append(members)
            counts.append(type_counts)
            totals.append(np.full(members.size, cfg.k, dtype=np.int64))
    return _assemble(dataset, centers, counts, totals, "knn", cfg.k)


def kth_neighbor_distances(
    dataset: Dataset, k: int = 10, scope_mode: ScopeMode = ScopeMode.GLOBAL
) -> np.ndarray:
    """Distance from every cell to its k-th nearest other cell, in row order.

    Raises:
        ScopeTooSmall: A scope holds k or fewer cells
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ranks = dataset.id_ranks()
    out = []
    for key, members in dataset.scopes(ScopeMode.parse(scope_mode) is ScopeMode.PER_FOV):
        if members.size <= k:
            raise ScopeTooSmall(
                f"Scope {key} has {members.size} cells, needs more than k={k}",
                {"scope": list(key), "size": int(members.size), "k": k},
            )
        _, kth = _knn_scope(dataset, members, k, ranks)
        out.append(kth)
    return np.concatenate(out) if out else np.empty(0)
