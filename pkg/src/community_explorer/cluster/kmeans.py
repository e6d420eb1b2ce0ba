"""
Lloyd k-means with k-means++ seeding and best-of-restarts selection.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from community_explorer.cluster.models import KMeansOptions, KMeansResult, Partition
from community_explorer.errors import KTooLarge
from community_explorer.seeding import derive_rng

logger = logging.getLogger(__name__)


def squared_distances(rows: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """(n, k) squared Euclidean distances, clipped at zero."""
    d2 = (
        np.einsum("ij,ij->i", rows, rows)[:, None]
        - 2.0 * rows @ centroids.T
        + np.einsum("ij,ij->i", centroids, centroids)[None, :]
    )
    return np.maximum(d2, 0.0)


def cluster_means(rows: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    sums = np.zeros((k, rows.shape[1]))
    np.add.at(sums, labels, rows)
    sizes = np.bincount(labels, minlength=k)
    return sums / np.maximum(sizes, 1)[:, None]


def within_ss(rows: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    """Sum of squared distances of rows to their cluster centroid."""
    diff = rows - centroids[labels]
    return float(np.einsum("ij,ij->", diff, diff))


def kmeans_plusplus(rows: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: each new center drawn with probability proportional to D²."""
    n = rows.shape[0]
    centers = np.empty((k, rows.shape[1]))
    centers[0] = rows[rng.integers(n)]
    closest = squared_distances(rows, centers[:1])[:, 0]
    for i in range(1, k):
        total = closest.sum()
        if total > 0:
            pick = rng.choice(n, p=closest / total)
        else:
            pick = rng.integers(n)
        centers[i] = rows[pick]
        closest = np.minimum(closest, squared_distances(rows, centers[i : i + 1])[:, 0])
    return centers


def _repair_empty(labels: np.ndarray, d2: np.ndarray, k: int) -> np.ndarray:
    """Move the point farthest from its centroid into each empty cluster."""
    sizes = np.bincount(labels, minlength=k)
    empty = np.flatnonzero(sizes == 0)
    if empty.size == 0:
        return labels
    labels = labels.copy()
    cost = d2[np.arange(labels.size), labels].copy()
    for j in empty:
        movable = sizes[labels] > 1
        i = int(np.argmax(np.where(movable, cost, -1.0)))
        sizes[labels[i]] -= 1
        labels[i] = j
        sizes[j] = 1
        cost[i] = -1.0
        logger.debug(f"Empty cluster {j} reseeded with row {i}")
    return labels


def lloyd(
    rows: np.ndarray,
    centroids: np.ndarray,
    max_iter: int = 300,
    tol: float = 1e-6,
) -> Tuple[np.ndarray, np.ndarray, float, int, Tuple[float, ...]]:
    """Lloyd iterations from given centroids.

    Stops when labels no longer change or the total squared centroid shift is
    at most ``tol``.

    Returns:
        (labels, centroids, wcss, iterations, wcss history)
    """
    k = centroids.shape[0]
    labels: Optional[np.ndarray] = None
    history = []
    iteration = 0
    for iteration in range(1, max_iter + 1):
        d2 = squared_distances(rows, centroids)
        new_labels = _repair_empty(np.argmin(d2, axis=1), d2, k)
        new_centroids = cluster_means(rows, new_labels, k)
        history.append(within_ss(rows, new_labels, new_centroids))
        shift = float(((new_centroids - centroids) ** 2).sum())
        centroids = new_centroids
        unchanged = labels is not None and np.array_equal(new_labels, labels)
        labels = new_labels
        if unchanged or shift <= tol:
            break
    return labels, centroids, history[-1], iteration, tuple(history)


def kmeans(
    rows: np.ndarray,
    k: int,
    seed: int = 0,
    max_iter: int = 300,
    tol: float = 1e-6,
    restarts: int = 10,
    options: Optional[KMeansOptions] = None,
) -> KMeansResult:
    """Best-of-restarts Lloyd k-means.

    Restart r is seeded from ``(seed, "kmeans", "restart", r)``. The lowest wcss
    wins; ties go to the lower restart index.

    Args:
        rows: (n, m) real matrix
        k: Number of clusters
        seed: Top-level seed
        max_iter: Lloyd iteration cap per restart
        tol: Centroid-shift tolerance
        restarts: Number of k-means++ restarts
        options: Overrides max_iter, tol and restarts when given

    Returns:
        KMeansResult

    Raises:
        KTooLarge: k exceeds the number of rows
        ValueError: k < 1 or empty input
    """
    if options is not None:
        max_iter, tol, restarts = options.max_iter, options.tol, options.restarts
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] == 0:
        raise ValueError("kmeans needs a non-empty 2-D row matrix")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = rows.shape[0]
    if k > n:
        raise KTooLarge(f"k={k} exceeds the number of rows ({n})", {"k": k, "rows": n})

    best = None
    for restart in range(restarts):
        rng = derive_rng(seed, "kmeans", "restart", restart)
        init = kmeans_plusplus(rows, k, rng)
        labels, centroids, wcss, iterations, history = lloyd(rows, init, max_iter, tol)
        if best is None or wcss < best[2]:
            best = (labels, centroids, wcss, iterations, history, restart)

    labels, centroids, wcss, iterations, history, restart = best
    logger.debug(f"kmeans k={k}: wcss={wcss:.6g} (restart {restart}, {iterations} iterations)")
    return KMeansResult(
        partition=Partition(labels=labels, k=k),
        centroids=centroids,
        wcss=wcss,
        iterations=iterations,
        restarts_used=restarts,
        seed=seed,
        restart=restart,
        history=history,
    )


def two_means(rows: np.ndarray, seed: int, restarts: int = 5) -> KMeansResult:
    """2-means used by the successive splitting procedures."""
    return kmeans(rows, 2, seed=seed, restarts=restarts)
