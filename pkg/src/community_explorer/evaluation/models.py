"""
Data models for evaluation results.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class AriReport:
    """Adjusted Rand index with its contingency summary."""

    ari: float
    n: int
    index: float  # Σ C(n_ij, 2)
    expected: float
    max_index: float
    rows: int  # clusters in the first partition
    columns: int  # clusters in the second partition

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ari": self.ari,
            "n": self.n,
            "index": self.index,
            "expected_index": self.expected,
            "max_index": self.max_index,
            "clusters_first": self.rows,
            "clusters_second": self.columns,
        }


@dataclass(frozen=True, eq=False)
class CommunityProfile:
    """Cell-type percentages per community.

    Attributes:
        type_names: Registry order of the percentage columns
        sizes: Labeled cells per community
        percentages: (n_communities, m) percentages, rows sum to 100
        highest_tumor: Community with the highest tumor share (None if flags disabled)
        highest_immune: Community with the highest B-plasma + T share
        highest_normal: Community with the highest normal-BEC share
    """

    type_names: Tuple[str, ...]
    sizes: np.ndarray
    percentages: np.ndarray
    highest_tumor: Optional[int] = None
    highest_immune: Optional[int] = None
    highest_normal: Optional[int] = None

    @property
    def n_communities(self) -> int:
        return int(self.sizes.size)

    @property
    def flags_enabled(self) -> bool:
        return self.highest_tumor is not None


@dataclass(frozen=True, eq=False)
class SampleFractionTable:
    """Per-sample percentage of labeled cells falling in one community.

    Attributes:
        community: Community index
        samples: Sample ids with at least one labeled cell
        x: 100 · k_i / N_i
        y: 1 for primary, 0 for metastasis
        k: Labeled cells of the sample inside the community
        totals: Labeled cells of the sample (N_i)
    """

    community: int
    samples: Tuple[str, ...]
    x: np.ndarray
    y: np.ndarray
    k: np.ndarray
    totals: np.ndarray

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class LogisticFit:
    """Two-parameter logistic regression fit.

    Attributes:
        alpha_hat: Intercept
        beta_hat: Slope
        converged: Newton steps fell below tolerance
        separation: "none", "quasi" or "complete"
        iterations: Newton iterations run
        log_likelihood: Log-likelihood at the returned estimate
        gradient: Score vector at the returned estimate
    """

    alpha_hat: float
    beta_hat: float
    converged: bool
    separation: str
    iterations: int
    log_likelihood: float
    gradient: Tuple[float, float] = (0.0, 0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha_hat": self.alpha_hat,
            "beta_hat": self.beta_hat,
            "converged": self.converged,
            "separation": self.separation,
            "iterations": self.iterations,
            "log_likelihood": self.log_likelihood,
            "gradient": list(self.gradient),
        }
