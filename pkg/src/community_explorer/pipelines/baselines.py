"""
Classical comparators as community assignments: fixed-k k-means, Elbow and Gap.
"""

import logging
from typing import Iterable, Optional, Tuple

from community_explorer.cluster.kmeans import kmeans
from community_explorer.cluster.models import SelectionResult
from community_explorer.cluster.selection import DEFAULT_GAP_BUDGET, elbow_select_k, gap_select_k
from community_explorer.pipelines.models import CommunityAssignment
from community_explorer.pipelines.rowset import Rows, as_rowset, assignment_for

logger = logging.getLogger(__name__)


def kmeans_communities(rows: Rows, k: int, seed: int = 0, restarts: int = 10) -> CommunityAssignment:
    """k-means with a fixed k (the "10-means" comparator)."""
    rowset = as_rowset(rows)
    result = kmeans(rowset.matrix, k, seed=seed, restarts=restarts)
    config = {"k": k, "restarts": restarts, "wcss": result.wcss}
    return assignment_for(rowset, result.labels, "kmeans", config, seed)


def elbow_communities(
    rows: Rows,
    k_range: Iterable[int] = range(1, 21),
    seed: int = 0,
    restarts: int = 10,
) -> Tuple[CommunityAssignment, SelectionResult]:
    """k-means at the Elbow-selected k."""
    rowset = as_rowset(rows)
    selection, results = elbow_select_k(rowset.matrix, k_range, seed=seed, restarts=restarts)
    chosen = results[selection.ks.index(selection.k)]
    config = {"k": selection.k, "k_range": [selection.ks[0], selection.ks[-1]], "restarts": restarts}
    return assignment_for(rowset, chosen.labels, "elbow", config, seed), selection


def gap_communities(
    rows: Rows,
    k_range: Iterable[int] = range(1, 11),
    B: int = 20,
    seed: int = 0,
    budget: Optional[int] = DEFAULT_GAP_BUDGET,
    workers: Optional[int] = 1,
) -> Tuple[Optional[CommunityAssignment], SelectionResult]:
    """k-means at the Gap-selected k; the assignment is None when Gap reports NA.

    Raises:
        ResourceExceeded: rows × B exceeds the budget
    """
    rowset = as_rowset(rows)
    selection = gap_select_k(rowset.matrix, k_range, B=B, seed=seed, budget=budget, workers=workers)
    if selection.k is None:
        return None, selection
    result = kmeans(rowset.matrix, selection.k, seed=seed)
    config = {"k": selection.k, "k_range": [selection.ks[0], selection.ks[-1]], "B": B}
    return assignment_for(rowset, result.labels, "gap", config, seed), selection
