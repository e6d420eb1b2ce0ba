"""
Configuration and result models for the community-detection pipelines.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from community_explorer.cluster.models import Dendrogram, Partition
from community_explorer.neighborhood.models import DiskConfig

SIZE_CAP_FLOOR = 200
SIZE_CAP_CEILING = 60_000


@dataclass(frozen=True)
class TmhcConfig:
    """DCD-TMHC settings.

    Attributes:
        K1: Minimum node size for continued SigClust testing in the Ward stage
        size_cap: Largest node handed from successive 2-means to the Ward stage;
            None resolves to clamp(n_rows // 50, 200, 60000)
        alpha: SigClust significance level
        n_sim: SigClust replicates per test
        seed: Top-level seed
        transform_policy: "clr" or "skip"
        disk: Disk configuration; None picks r automatically with no boundary margin
        variant: SigClust eigenvalue thresholding
        sigclust_max_rows: Row budget of one SigClust test
        target_occupancy: Median disk occupancy aimed at when r is automatic
        workers: Process count for SigClust replicates
    """

    K1: float = 0
    size_cap: Optional[int] = None
    alpha: float = 0.05
    n_sim: int = 100
    seed: int = 0
    transform_policy: str = "clr"
    disk: Optional[DiskConfig] = None
    variant: str = "soft"
    sigclust_max_rows: Optional[int] = 2000
    target_occupancy: int = 40
    workers: Optional[int] = 1

    def __post_init__(self) -> None:
        if self.K1 < 0:
            raise ValueError(f"K1 must be >= 0, got {self.K1}")
        if self.size_cap is not None and self.size_cap < 2:
            raise ValueError(f"size_cap must be >= 2, got {self.size_cap}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.transform_policy not in ("clr", "skip"):
            raise ValueError(f"transform_policy must be clr or skip, got {self.transform_policy!r}")

    def resolved_size_cap(self, n_rows: int) -> int:
        if self.size_cap is not None:
            return self.size_cap
        return int(min(max(n_rows // 50, SIZE_CAP_FLOOR), SIZE_CAP_CEILING))

    def as_dict(self) -> Dict[str, Any]:
        return {
            "K1": _finite_or_none(self.K1),
            "size_cap": self.size_cap,
            "alpha": self.alpha,
            "n_sim": self.n_sim,
            "seed": self.seed,
            "transform_policy": self.transform_policy,
            "disk": None if self.disk is None else self.disk.as_dict(),
            "variant": self.variant,
            "sigclust_max_rows": self.sigclust_max_rows,
            "target_occupancy": self.target_occupancy,
        }


@dataclass(frozen=True)
class StmConfig:
    """Successive 2-means settings (K1 may be math.inf)."""

    K1: float = 2
    K2: int = 1
    seed: int = 0
    restarts: int = 5

    def __post_init__(self) -> None:
        if self.K1 < 2:
            raise ValueError(f"K1 must be >= 2, got {self.K1}")
        if self.K2 < 1:
            raise ValueError(f"K2 must be >= 1, got {self.K2}")

    def as_dict(self) -> Dict[str, Any]:
        return {"K1": _finite_or_none(self.K1), "K2": self.K2, "seed": self.seed, "restarts": self.restarts}


def _finite_or_none(value: float) -> Optional[float]:
    if math.isinf(value):
        return None
    return int(value) if float(value).is_integer() else float(value)


@dataclass(frozen=True, eq=False)
class CommunityAssignment:
    """Community label per composition row (cell).

    Attributes:
        cell_ids: Center cell of each labeled row
        labels: Community index per row, dense in [0, n_communities)
        method: Pipeline name
        config: Effective configuration snapshot
        seed: Top-level seed
        row_samples: Sample per row (None when unknown)
        row_fovs: FOV per row (None when absent)
    """

    cell_ids: np.ndarray
    labels: np.ndarray
    method: str
    config: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    row_samples: Optional[np.ndarray] = None
    row_fovs: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if len(self.cell_ids) != labels.size:
            raise ValueError("cell_ids and labels must have equal length")
        if labels.size and not np.array_equal(np.unique(labels), np.arange(labels.max() + 1)):
            raise ValueError("community labels must be dense in [0, count)")

    @property
    def n_communities(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def sizes(self) -> List[int]:
        return np.bincount(self.labels, minlength=self.n_communities).tolist()

    def labels_by_cell(self) -> Dict[str, int]:
        return dict(zip(self.cell_ids.tolist(), self.labels.tolist()))

    def to_partition(self) -> Partition:
        return Partition(labels=self.labels, k=max(self.n_communities, 1))

    def manifest(self) -> Dict[str, Any]:
        """Run manifest: method, configuration, seed, community count and sizes."""
        return {
            "method": self.method,
            "config": self.config,
            "seed": self.seed,
            "n_communities": self.n_communities,
            "community_sizes": self.sizes(),
            "n_rows": int(self.labels.size),
        }

    def __len__(self) -> int:
        return int(self.labels.size)


@dataclass(eq=False)
class TmhcTrace:
    """Intermediate structure of one DCD-TMHC run."""

    size_cap: int
    step2_leaves: List[np.ndarray] = field(default_factory=list)
    step2_finalized: List[np.ndarray] = field(default_factory=list)
    step3_emitted: List[np.ndarray] = field(default_factory=list)
    dendrogram: Optional[Dendrogram] = None
    tests_run: int = 0
