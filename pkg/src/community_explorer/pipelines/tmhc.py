"""
DCD-TMHC: disk composition, SigClust-gated successive 2-means, then a
SigClust-gated top-down cut of a weighted Ward dendrogram.

Step 2 splits any node larger than the size cap with 2-means. A split that
SigClust does not find significant ends there and the node is never divided
further. Those finalized nodes and the nodes within the size cap all become
weighted Ward leaves, so small pieces can still join a finalized node. Step 3
walks the Ward tree from the root and stops at nodes that are too small, single
leaves, or whose split into their two children SigClust does not find
significant; such a node is kept whole.
"""

import logging
from typing import Any, Optional, Tuple

import numpy as np
from codetiming import Timer

from community_explorer.cluster.kmeans import two_means
from community_explorer.cluster.ward import ward_agglomerate
from community_explorer.data.models import Dataset
from community_explorer.errors import DegenerateData
from community_explorer.neighborhood.composition import disk_composition
from community_explorer.neighborhood.diagnostics import auto_radius
from community_explorer.neighborhood.models import DiskConfig, ScopeMode
from community_explorer.pipelines.models import CommunityAssignment, TmhcConfig, TmhcTrace
from community_explorer.pipelines.rowset import Rows, as_rowset, assignment_for, labels_from_groups
from community_explorer.seeding import derive_seed
from community_explorer.sigclust import SigClustOptions, sigclust_test
from community_explorer.transform import clr_transform

logger = logging.getLogger(__name__)


def _significant(
    matrix: np.ndarray,
    members: np.ndarray,
    cfg: TmhcConfig,
    *path: object,
    split: Optional[np.ndarray] = None,
) -> bool:
    """True when SigClust rejects the single-Gaussian hypothesis for a node.

    With split given, the node's own 2-partition is scored instead of its
    best 2-means split.
    """
    options = SigClustOptions(
        n_sim=cfg.n_sim,
        variant=cfg.variant,
        max_rows=cfg.sigclust_max_rows,
        workers=cfg.workers,
    )
    try:
        result = sigclust_test(
            matrix[members],
            seed=derive_seed(cfg.seed, "tmhc", *path),
            options=options,
            labels=split,
        )
    except DegenerateData:
        logger.debug(f"Node {path} has degenerate rows; not split")
        return False
    logger.debug(f"Node {path} ({members.size} rows): p={result.p_value:.4f}")
    return result.p_value < cfg.alpha


def _step2(matrix: np.ndarray, cfg: TmhcConfig, trace: TmhcTrace) -> None:
    stack = [("r", np.arange(matrix.shape[0]))]
    while stack:
        path, members = stack.pop()
        if members.size <= trace.size_cap:
            trace.step2_leaves.append(members)
            continue
        trace.tests_run += 1
        if not _significant(matrix, members, cfg, "step2", path):
            trace.step2_finalized.append(members)
            continue
        split = two_means(matrix[members], derive_seed(cfg.seed, "tmhc", "split", path))
        children = [members[split.labels == j] for j in (0, 1)]
        stack.append((path + "1", children[1]))
        stack.append((path + "0", children[0]))


def _step3(matrix: np.ndarray, cfg: TmhcConfig, trace: TmhcTrace) -> None:
    leaves = trace.step2_finalized + trace.step2_leaves
    if not leaves:
        return
    dendrogram = ward_agglomerate(
        [(matrix[m].mean(axis=0), float(m.size)) for m in leaves], members=leaves
    )
    trace.dendrogram = dendrogram

    stack = [dendrogram.root]
    while stack:
        node = stack.pop()
        children = dendrogram.children(node)
        if children is None:
            trace.step3_emitted.append(dendrogram.members_of(node))
            continue
        left, right = (dendrogram.members_of(child) for child in children)
        members = np.concatenate([left, right])
        if members.size < cfg.K1:
            trace.step3_emitted.append(members)
            continue
        split = np.repeat([0, 1], [left.size, right.size])
        trace.tests_run += 1
        if not _significant(matrix, members, cfg, "step3", node, split=split):
            trace.step3_emitted.append(members)
            continue
        stack.extend((children[1], children[0]))


def tmhc_cluster(rows: Rows, cfg: TmhcConfig) -> Tuple[CommunityAssignment, TmhcTrace]:
    """DCD-TMHC Steps 2 and 3 on an already built row matrix.

    Communities are the nodes where the Ward cut stops, numbered in
    depth-first order.

    Args:
        rows: Matrix, composition or log-ratio rows (non-empty)
        cfg: Pipeline configuration

    Returns:
        (CommunityAssignment, TmhcTrace)
    """
    rowset = as_rowset(rows)
    if rowset.n == 0:
        raise ValueError("tmhc_cluster needs at least one row")
    trace = TmhcTrace(size_cap=cfg.resolved_size_cap(rowset.n))
    logger.info(f"DCD-TMHC on {rowset.n:,} rows, size cap {trace.size_cap:,}")

    with Timer(name="tmhc_step2", text="Step 2 (successive 2-means) took {:.2f}s", logger=logger.info):
        _step2(rowset.matrix, cfg, trace)
    with Timer(name="tmhc_step3", text="Step 3 (Ward cut) took {:.2f}s", logger=logger.info):
        _step3(rowset.matrix, cfg, trace)

    groups = trace.step3_emitted
    labels = labels_from_groups(groups, rowset.n)
    logger.info(
        f"DCD-TMHC found {len(groups)} communities "
        f"from {len(trace.step2_finalized)} finalized and {len(trace.step2_leaves)} capped Step-2 nodes"
    )
    config = cfg.as_dict()
    config["resolved_size_cap"] = trace.size_cap
    return assignment_for(rowset, labels, "dcd-tmhc", config, cfg.seed), trace


def simulation_disk_config(
    dataset: Dataset, seed: int = 0, target_occupancy: int = 40
) -> DiskConfig:
    """Disk settings for simulated data: automatic r, no boundary exclusion, global scope."""
    r = auto_radius(dataset, target_occupancy, seed=seed)
    return DiskConfig(r=r, boundary_margin=0.0, min_cells=1, scope_mode=ScopeMode.GLOBAL)


def simulation_config(dataset: Dataset, seed: int = 0, **overrides: Any) -> TmhcConfig:
    """DCD-TMHC settings for simulated tissue.

    Simulated compositions are mostly zeros, so rows are clustered as raw
    fractions (transform skipped) over disks from :func:`simulation_disk_config`.

    Args:
        dataset: Simulated cells, used to pick r
        seed: Top-level seed
        **overrides: Any other TmhcConfig field (K1, n_sim, workers, ...)
    """
    target = overrides.pop("target_occupancy", 40)
    disk = overrides.pop("disk", None) or simulation_disk_config(dataset, seed, target)
    return TmhcConfig(
        seed=seed,
        transform_policy=overrides.pop("transform_policy", "skip"),
        disk=disk,
        target_occupancy=target,
        **overrides,
    )


def dcd_tmhc(
    dataset: Dataset, cfg: TmhcConfig, disk: Optional[DiskConfig] = None
) -> CommunityAssignment:
    """Full DCD-TMHC: disk composition, optional CLR, then Steps 2 and 3.

    Args:
        dataset: Cells (non-empty)
        cfg: Pipeline configuration; cfg.disk None means automatic r
        disk: Overrides cfg.disk

    Returns:
        CommunityAssignment over the retained disk centers

    Raises:
        NoRowsRetained: Every disk was excluded
    """
    if dataset.n == 0:
        raise ValueError("dcd_tmhc needs a non-empty dataset")
    disk = disk or cfg.disk or simulation_disk_config(dataset, cfg.seed, cfg.target_occupancy)
    with Timer(name="tmhc_step1", text="Step 1 (composition) took {:.2f}s", logger=logger.info):
        composition = disk_composition(dataset, disk)
        rows = clr_transform(composition, "pseudo_count" if cfg.transform_policy == "clr" else "skip")
    assignment, _ = tmhc_cluster(rows, cfg)
    config = dict(assignment.config)
    config["disk"] = disk.as_dict()
    return assignment_for(as_rowset(rows), assignment.labels, "dcd-tmhc", config, cfg.seed)
