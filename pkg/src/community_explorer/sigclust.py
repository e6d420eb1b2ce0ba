"""
Monte Carlo test of "one Gaussian" against "two clusters".

The statistic is the cluster index (within-cluster SS of the best 2-means split
over the total SS). The null is a mean-zero Gaussian whose covariance
eigenvalues come from the data, floored at a robust background-noise level;
the p-value counts simulated indices at or below the observed one.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.stats import median_abs_deviation

from community_explorer.cluster.kmeans import kmeans
from community_explorer.cluster.models import Partition
from community_explorer.errors import DegenerateData, InsufficientRows
from community_explorer.seeding import derive_rng, derive_seed
from community_explorer.utils.parallel import run_tasks

logger = logging.getLogger(__name__)

MAD_TO_SD = 0.6745
VARIANTS = ("hard", "soft")


@dataclass(frozen=True)
class SigClustOptions:
    """Settings of the Monte Carlo test.

    Attributes:
        n_sim: Number of simulated null datasets
        variant: Eigenvalue thresholding, "hard" or "soft"
        restarts: 2-means restarts for observed and simulated indices
        max_rows: Test a seeded subsample when there are more rows (None: all)
        workers: Process count for the replicates
    """

    n_sim: int = 1000
    variant: str = "soft"
    restarts: int = 5
    max_rows: Optional[int] = None
    workers: Optional[int] = 1

    def __post_init__(self) -> None:
        if self.n_sim < 1:
            raise ValueError(f"n_sim must be >= 1, got {self.n_sim}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.max_rows is not None and self.max_rows < 2:
            raise ValueError(f"max_rows must be >= 2, got {self.max_rows}")

    def as_dict(self) -> Dict[str, Any]:
        return {
            "n_sim": self.n_sim,
            "variant": self.variant,
            "restarts": self.restarts,
            "max_rows": self.max_rows,
        }


@dataclass(frozen=True)
class SigClustResult:
    """Outcome of one test."""

    ci: float
    p_value: float
    n_sim: int
    null_eigenvalues: Tuple[float, ...]
    variant: str
    noise_variance: float = 0.0
    n_rows: int = 0
    simulated_ci: Tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ci": self.ci,
            "p_value": self.p_value,
            "n_sim": self.n_sim,
            "variant": self.variant,
            "null_eigenvalues": list(self.null_eigenvalues),
            "noise_variance": self.noise_variance,
            "n_rows": self.n_rows,
        }


def total_ss(rows: np.ndarray) -> float:
    centered = rows - rows.mean(axis=0)
    return float(np.einsum("ij,ij->", centered, centered))


def cluster_index(rows: np.ndarray, two_partition: Partition) -> float:
    """Within-cluster SS of a 2-partition divided by the total SS.

    Raises:
        DegenerateData: Total SS is zero
        ValueError: Not a 2-partition of the rows
    """
    rows = np.asarray(rows, dtype=np.float64)
    if two_partition.k != 2 or len(two_partition) != rows.shape[0]:
        raise ValueError("cluster_index needs a 2-partition aligned with the rows")
    total = total_ss(rows)
    if total <= 0:
        raise DegenerateData("Rows have zero total sum of squares", {"rows": rows.shape[0]})
    within = sum(total_ss(rows[two_partition.labels == j]) for j in (0, 1))
    return float(within / total)


def noise_variance(rows: np.ndarray) -> float:
    """Background noise σ²_N from the MAD of the column-centered entries.

    Entries are centered by their column means before the MAD is taken, so the
    estimate measures spread within columns only and is translation invariant.
    The MAD of the raw entries would also count the gaps between column levels
    (rare types near zero, common types at large fractions) as noise.
    """
    centered = rows - rows.mean(axis=0)
    mad = median_abs_deviation(centered, axis=None)
    return float((mad / MAD_TO_SD) ** 2)


def covariance_eigenvalues(rows: np.ndarray) -> np.ndarray:
    """Sample covariance eigenvalues, descending, clipped at zero."""
    cov = np.atleast_2d(np.cov(rows, rowvar=False))
    return np.clip(np.linalg.eigvalsh(cov)[::-1], 0.0, None)


def null_eigenvalues(eigenvalues: np.ndarray, sigma2: float, variant: str = "soft") -> Tuple[np.ndarray, str]:
    """Null-model eigenvalues.

    hard: max(λ_j, σ²). soft: max(λ_j − τ, σ²) with the τ ≥ 0 that keeps the
    total variance; when the total is below m·σ² no such τ exists and the hard
    rule is used.

    Returns:
        (eigenvalues, variant actually applied)
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if variant == "hard":
        return np.maximum(lam, sigma2), "hard"
    if variant != "soft":
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")

    target = lam.sum()
    if target < lam.size * sigma2:
        logger.debug("Soft thresholding infeasible; falling back to hard")
        return np.maximum(lam, sigma2), "hard"

    lo, hi = 0.0, max(float(lam.max()), 0.0)
    for _ in range(200):
        tau = 0.5 * (lo + hi)
        if np.maximum(lam - tau, sigma2).sum() > target:
            lo = tau
        else:
            hi = tau
    return np.maximum(lam - hi, sigma2), "soft"


def _best_two_means_ci(rows: np.ndarray, seed: int, restarts: int) -> float:
    result = kmeans(rows, 2, seed=seed, restarts=restarts)
    return result.wcss / total_ss(rows)


def _labeled_ci(rows: np.ndarray, labels: np.ndarray) -> float:
    # a side emptied by subsampling leaves within SS equal to the total
    within = sum(total_ss(rows[labels == j]) for j in (0, 1) if np.any(labels == j))
    return within / total_ss(rows)


def _simulated_ci(task: Tuple[np.ndarray, int, int, int, int]) -> float:
    scales, n, seed, index, restarts = task
    rng = derive_rng(seed, "sigclust", "replicate", index)
    sample = rng.standard_normal((n, scales.size)) * scales
    return _best_two_means_ci(sample, derive_seed(seed, "sigclust", "replicate", index), restarts)


def sigclust_test(
    rows: np.ndarray,
    n_sim: int = 1000,
    seed: int = 0,
    variant: str = "soft",
    options: Optional[SigClustOptions] = None,
    labels: Optional[np.ndarray] = None,
) -> SigClustResult:
    """Test whether rows come from a single Gaussian.

    The observed index is that of the best 2-means split, or of a given
    2-partition when labels is passed. Simulated indices always use 2-means, so a
    given split is only significant when it is at least as sharp as the splits
    found in Gaussian noise.

    Args:
        rows: (n, m) real matrix
        n_sim: Number of simulated datasets
        seed: Seed for the subsample, observed split and replicates
        variant: "hard" or "soft" eigenvalue thresholding
        options: Full settings; when given, n_sim and variant are taken from it
        labels: Optional 0/1 label per row fixing the observed split

    Returns:
        SigClustResult; p_value = (1 + #{CI_sim <= CI_obs}) / (1 + n_sim)

    Raises:
        InsufficientRows: Fewer than 2 rows
        DegenerateData: Zero total SS
        ValueError: labels not aligned with rows or not 0/1
    """
    options = options or SigClustOptions(n_sim=n_sim, variant=variant)
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise InsufficientRows(
            f"SigClust needs at least 2 rows, got {rows.shape[0] if rows.ndim else 0}",
            {"rows": int(rows.shape[0]) if rows.ndim else 0},
        )
    if labels is not None:
        labels = np.asarray(labels)
        if labels.shape != (rows.shape[0],) or not np.isin(labels, (0, 1)).all():
            raise ValueError("labels must hold one 0/1 value per row")
    if options.max_rows is not None and rows.shape[0] > options.max_rows:
        rng = derive_rng(seed, "sigclust", "subsample")
        keep = np.sort(rng.choice(rows.shape[0], size=options.max_rows, replace=False))
        rows = rows[keep]
        if labels is not None:
            labels = labels[keep]
    n = rows.shape[0]

    if total_ss(rows) <= 0:
        raise DegenerateData("Rows have zero total sum of squares", {"rows": n})

    if labels is None:
        observed = _best_two_means_ci(rows, derive_seed(seed, "sigclust", "observed"), options.restarts)
    else:
        observed = _labeled_ci(rows, labels)
    sigma2 = noise_variance(rows)
    lam, applied = null_eigenvalues(covariance_eigenvalues(rows), sigma2, options.variant)

    tasks = [(np.sqrt(lam), n, seed, i, options.restarts) for i in range(options.n_sim)]
    simulated = np.array(run_tasks(_simulated_ci, tasks, options.workers))
    p_value = (1 + int(np.sum(simulated <= observed))) / (1 + options.n_sim)

    logger.debug(
        f"SigClust n={n}: CI={observed:.4f}, p={p_value:.4f} ({applied}, σ²_N={sigma2:.3g})"
    )
    return SigClustResult(
        ci=float(observed),
        p_value=float(p_value),
        n_sim=options.n_sim,
        null_eigenvalues=tuple(float(v) for v in lam),
        variant=applied,
        noise_variance=sigma2,
        n_rows=n,
        simulated_ci=tuple(float(v) for v in simulated),
    )
