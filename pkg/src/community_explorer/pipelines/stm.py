"""
Successive 2-means (STM): recursive 2-means with size-based stopping.
"""

import logging
from typing import List

import numpy as np
from codetiming import Timer

from community_explorer.cluster.kmeans import two_means
from community_explorer.pipelines.models import CommunityAssignment, StmConfig
from community_explorer.pipelines.rowset import Rows, as_rowset, assignment_for, labels_from_groups
from community_explorer.seeding import derive_seed

logger = logging.getLogger(__name__)


def stm_groups(matrix: np.ndarray, cfg: StmConfig) -> List[np.ndarray]:
    """Row groups of STM in depth-first order (child 0 before child 1).

    Node seeds derive from the node's path, so a node splits the same way no
    matter which other nodes were split.
    """
    groups: List[np.ndarray] = []
    stack = [("r", np.arange(matrix.shape[0]))]
    while stack:
        path, members = stack.pop()
        if members.size < cfg.K1 or members.size < 2:
            groups.append(members)
            continue
        split = two_means(matrix[members], derive_seed(cfg.seed, "stm", "split", path), cfg.restarts)
        children = [members[split.labels == j] for j in (0, 1)]
        if min(c.size for c in children) < cfg.K2:
            groups.append(members)
            continue
        logger.debug(f"STM node {path} ({members.size}) split into {children[0].size}/{children[1].size}")
        stack.append((path + "1", children[1]))
        stack.append((path + "0", children[0]))
    return groups


def stm(rows: Rows, cfg: StmConfig) -> CommunityAssignment:
    """Successive 2-means community detection.

    At a node S: if |S| < K1, S is one community; otherwise S is split by
    2-means, and if either child has fewer than K2 rows S is one community,
    else both children recurse.

    Args:
        rows: Matrix, composition or log-ratio rows (non-empty)
        cfg: K1, K2 and seed

    Returns:
        CommunityAssignment with communities numbered in depth-first order
    """
    rowset = as_rowset(rows)
    if rowset.n == 0:
        raise ValueError("stm needs at least one row")
    with Timer(name="stm", text="STM finished in {:.2f}s", logger=logger.info):
        groups = stm_groups(rowset.matrix, cfg)
    logger.info(f"STM found {len(groups)} communities (K1={cfg.K1}, K2={cfg.K2})")
    labels = labels_from_groups(groups, rowset.n)
    return assignment_for(rowset, labels, "stm", cfg.as_dict(), cfg.seed)
