"""
Greedy Ward agglomeration over weighted leaves.

Merging A and B costs ΔESS = w_A·w_B / (w_A + w_B) · ‖c_A − c_B‖², the exact
increase of the error sum of squares when each leaf stands for w identical
points. Each step merges the cheapest pair; exact ties go to the smallest
(node_a, node_b) pair.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from community_explorer.cluster.models import Dendrogram, Merge

logger = logging.getLogger(__name__)


def ward_cost(c_a: np.ndarray, w_a: float, c_b: np.ndarray, w_b: float) -> float:
    """ΔESS of merging two weighted groups."""
    diff = np.asarray(c_a, dtype=np.float64) - np.asarray(c_b, dtype=np.float64)
    return float(w_a * w_b / (w_a + w_b) * np.dot(diff, diff))


def _cost_row(centroids: np.ndarray, weights: np.ndarray, slot: int) -> np.ndarray:
    diff = centroids - centroids[slot]
    w = weights[slot]
    return weights * w / (weights + w) * np.einsum("ij,ij->i", diff, diff)


def ward_agglomerate(
    leaves: Sequence[Tuple[np.ndarray, float]],
    members: Optional[List[np.ndarray]] = None,
) -> Dendrogram:
    """Agglomerate weighted leaves into a Ward dendrogram.

    Args:
        leaves: (centroid, weight) per leaf; weights >= 1
        members: Row ids represented by each leaf (default: leaf i holds row i)

    Returns:
        Dendrogram with L - 1 merges

    Raises:
        ValueError: No leaves, or a weight below 1
    """
    if len(leaves) == 0:
        raise ValueError("ward_agglomerate needs at least one leaf")
    centroids = np.array([np.asarray(c, dtype=np.float64) for c, _ in leaves])
    weights = np.array([float(w) for _, w in leaves])
    if np.any(weights < 1):
        raise ValueError("Leaf weights must be >= 1")
    if members is None:
        members = [np.array([i], dtype=np.int64) for i in range(len(leaves))]

    n_leaves = len(leaves)
    dendrogram = Dendrogram(
        centroids=centroids.copy(),
        weights=weights.copy(),
        members=[np.asarray(m, dtype=np.int64) for m in members],
    )

    work_c = centroids.copy()
    work_w = weights.copy()
    node_of = np.arange(n_leaves)
    alive = np.ones(n_leaves, dtype=bool)

    cost = np.full((n_leaves, n_leaves), np.inf)
    for i in range(n_leaves):
        cost[i, i + 1 :] = _cost_row(work_c, work_w, i)[i + 1 :]

    for step in range(n_leaves - 1):
        best = cost.min()
        ties = np.argwhere(cost == best)
        pairs = np.sort(node_of[ties], axis=1)
        pick = np.lexsort((pairs[:, 1], pairs[:, 0]))[0]
        i, j = sorted(ties[pick])
        a, b = int(pairs[pick, 0]), int(pairs[pick, 1])

        w_new = work_w[i] + work_w[j]
        work_c[i] = (work_w[i] * work_c[i] + work_w[j] * work_c[j]) / w_new
        work_w[i] = w_new
        alive[j] = False
        node_of[i] = n_leaves + step
        dendrogram.merges.append(Merge(a=a, b=b, height=float(best), weight=float(w_new)))

        cost[j, :] = np.inf
        cost[:, j] = np.inf
        row = _cost_row(work_c, work_w, i)
        row[~alive] = np.inf
        row[i] = np.inf
        cost[i, i + 1 :] = row[i + 1 :]
        cost[:i, i] = row[:i]

    logger.debug(f"Ward agglomeration of {n_leaves} leaves complete")
    return dendrogram
