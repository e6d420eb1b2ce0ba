"""
Choosing k: automated Elbow (chord-distance knee) and the Gap statistic.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from community_explorer.cluster.kmeans import kmeans
from community_explorer.cluster.models import KMeansResult, SelectionResult
from community_explorer.errors import ResourceExceeded
from community_explorer.seeding import derive_rng, derive_seed
from community_explorer.utils.parallel import run_tasks

logger = logging.getLogger(__name__)

DEFAULT_GAP_BUDGET = 2_000_000  # rows × reference sets


def knee_index(ks: Sequence[float], values: Sequence[float]) -> int:
    """Position of the point farthest from the chord joining the curve's endpoints.

    Both axes are scaled to [0, 1] first. Ties go to the earliest position.
    """
    x = np.asarray(ks, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if x.size < 3:
        return 0
    xs = (x - x[0]) / (x[-1] - x[0])
    y_span = y.max() - y.min()
    if y_span <= 0:
        return 0
    ys = (y - y.min()) / y_span
    dx, dy = xs[-1] - xs[0], ys[-1] - ys[0]
    distance = np.abs(dy * (xs - xs[0]) - dx * (ys - ys[0])) / np.hypot(dx, dy)
    return int(np.argmax(distance))


def elbow_select_k(
    rows: np.ndarray,
    k_range: Iterable[int] = range(1, 21),
    seed: int = 0,
    restarts: int = 10,
) -> Tuple[SelectionResult, List[KMeansResult]]:
    """Run k-means per k and pick the knee of the wcss curve.

    Args:
        rows: (n, m) real matrix
        k_range: Candidate k values (ascending)
        seed: Top-level seed
        restarts: k-means restarts per k

    Returns:
        (SelectionResult with the wcss curve, k-means result per candidate k)

    Raises:
        KTooLarge: A candidate k exceeds the row count
    """
    ks = tuple(sorted(set(int(k) for k in k_range)))
    results = [kmeans(rows, k, seed=seed, restarts=restarts) for k in ks]
    wcss = tuple(r.wcss for r in results)
    chosen = ks[knee_index(ks, wcss)]
    logger.info(f"Elbow selected k={chosen} over k in [{ks[0]}, {ks[-1]}]")
    return SelectionResult(method="elbow", k=chosen, ks=ks, statistic=wcss), results


def _log_dispersion(wcss: float) -> float:
    return float(np.log(max(wcss, np.finfo(float).tiny)))


def _reference_log_dispersions(task: Tuple[np.ndarray, np.ndarray, int, int, Tuple[int, ...], int, int]) -> np.ndarray:
    lower, upper, n, seed, ks, b, restarts = task
    rng = derive_rng(seed, "gap", "reference", b)
    reference = rng.uniform(lower, upper, size=(n, lower.size))
    return np.array(
        [
            _log_dispersion(
                kmeans(reference, k, seed=derive_seed(seed, "gap", "kmeans", b), restarts=restarts).wcss
            )
            for k in ks
        ]
    )


def gap_select_k(
    rows: np.ndarray,
    k_range: Iterable[int] = range(1, 11),
    B: int = 20,
    seed: int = 0,
    restarts: int = 3,
    budget: Optional[int] = DEFAULT_GAP_BUDGET,
    workers: Optional[int] = 1,
) -> SelectionResult:
    """Gap statistic with uniform references over the data's bounding box.

    Gap(k) = mean_b log W*_kb − log W_k, s_k = sd_k·sqrt(1 + 1/B). The smallest k
    with Gap(k) ≥ Gap(k+1) − s_{k+1} is selected; ``k`` is None (NA) when no k in
    the range satisfies the rule.

    Args:
        rows: (n, m) real matrix
        k_range: Candidate k values (ascending, consecutive)
        B: Number of reference sets
        seed: Top-level seed
        restarts: k-means restarts per fit
        budget: Maximum rows × B (None: unlimited)
        workers: Process count for the reference sets

    Returns:
        SelectionResult with the Gap curve and s_k

    Raises:
        ResourceExceeded: rows × B exceeds the budget
    """
    rows = np.asarray(rows, dtype=np.float64)
    n = rows.shape[0]
    if B < 1:
        raise ValueError(f"B must be >= 1, got {B}")
    if budget is not None and n * B > budget:
        raise ResourceExceeded(
            f"Gap statistic needs {n:,} rows × {B} references, over the budget of {budget:,}",
            {"rows": n, "B": B, "budget": budget},
        )
    ks = tuple(sorted(set(int(k) for k in k_range)))
    observed = np.array(
        [_log_dispersion(kmeans(rows, k, seed=seed, restarts=restarts).wcss) for k in ks]
    )

    lower, upper = rows.min(axis=0), rows.max(axis=0)
    tasks = [(lower, upper, n, seed, ks, b, restarts) for b in range(B)]
    reference = np.vstack(run_tasks(_reference_log_dispersions, tasks, workers))

    gap = reference.mean(axis=0) - observed
    spread = reference.std(axis=0) * np.sqrt(1.0 + 1.0 / B)

    chosen = None
    for i in range(len(ks) - 1):
        if gap[i] >= gap[i + 1] - spread[i + 1]:
            chosen = ks[i]
            break
    if chosen is None:
        logger.warning(f"Gap rule not met for k in [{ks[0]}, {ks[-1]}]; reporting NA")
    else:
        logger.info(f"Gap statistic selected k={chosen}")
    return SelectionResult(
        method="gap",
        k=chosen,
        ks=ks,
        statistic=tuple(float(g) for g in gap),
        spread=tuple(float(s) for s in spread),
    )
