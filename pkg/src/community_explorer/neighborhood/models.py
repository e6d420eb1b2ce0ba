"""
Data models for neighbourhood compositions.
"""

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from community_explorer.data.models import CellTypeRegistry


class ScopeMode(str, Enum):
    """Which cells are indexed together."""

    GLOBAL = "global"  # one scope per sample
    PER_FOV = "per_fov"  # one scope per (sample, fov)

    @classmethod
    def parse(cls, value: "str | ScopeMode") -> "ScopeMode":
        """Accept enum members, values and the CLI spelling ``per-fov``."""
        if isinstance(value, cls):
            return value
        return cls(str(value).replace("-", "_").lower())


@dataclass(frozen=True)
class DiskConfig:
    """Disk composition parameters.

    Attributes:
        r: Disk radius (µm)
        boundary_margin: Minimum distance from a center to every edge of its
            scope's bounding box; None means r / 2
        min_cells: Minimum disk occupancy n_i for a row to be kept
        scope_mode: Scope of the spatial index
    """

    r: float
    boundary_margin: Optional[float] = None
    min_cells: int = 1
    scope_mode: ScopeMode = ScopeMode.GLOBAL

    def __post_init__(self) -> None:
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError(f"r must be a positive finite length, got {self.r}")
        if self.boundary_margin is not None and self.boundary_margin < 0:
            raise ValueError(f"boundary_margin must be >= 0, got {self.boundary_margin}")
        if self.min_cells < 1:
            raise ValueError(f"min_cells must be >= 1, got {self.min_cells}")
        object.__setattr__(self, "scope_mode", ScopeMode.parse(self.scope_mode))

    @property
    def margin(self) -> float:
        """Effective boundary margin."""
        return self.r / 2 if self.boundary_margin is None else float(self.boundary_margin)

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["boundary_margin"] = self.margin
        data["scope_mode"] = self.scope_mode.value
        return data


@dataclass(frozen=True)
class KnnConfig:
    """kNN composition parameters."""

    k: int = 10
    scope_mode: ScopeMode = ScopeMode.GLOBAL

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "scope_mode", ScopeMode.parse(self.scope_mode))

    def as_dict(self) -> Dict[str, Any]:
        return {"k": self.k, "scope_mode": self.scope_mode.value}


@dataclass(frozen=True, eq=False)
class CompositionMatrix:
    """Row-stochastic neighbourhood compositions with back-references to the centers.

    Attributes:
        rows: (n_rows, m) fractions; each row sums to 1
        row_cells: cell_id of the center of each row
        counts: n_i per row (disk) or the constant k (kNN)
        registry: Column order
        row_samples: Sample of each center
        row_fovs: FOV of each center, or None when the data has no FOVs
        variant: "disk" or "knn"
        parameter: r for disk, k for kNN
    """

    rows: np.ndarray
    row_cells: np.ndarray
    counts: np.ndarray
    registry: CellTypeRegistry
    row_samples: np.ndarray
    row_fovs: Optional[np.ndarray] = None
    variant: str = "disk"
    parameter: Optional[float] = None

    def __post_init__(self) -> None:
        n = self.rows.shape[0]
        if self.rows.ndim != 2 or self.rows.shape[1] != self.registry.m:
            raise ValueError(
                f"rows must have shape (n, {self.registry.m}), got {self.rows.shape}"
            )
        for name in ("row_cells", "counts", "row_samples"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has {len(getattr(self, name))} entries, expected {n}")
        if self.variant not in ("disk", "knn"):
            raise ValueError(f"Unknown composition variant {self.variant!r}")

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    @property
    def m(self) -> int:
        return self.registry.m

    def type_counts(self) -> np.ndarray:
        """Integer counts n_ij recovered from fractions and totals."""
        return np.rint(self.rows * self.counts[:, None]).astype(np.int64)

    def __len__(self) -> int:
        return self.n_rows


@dataclass(frozen=True)
class Histogram:
    """Fixed-bin histogram (bin edges and counts)."""

    edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def of(cls, values: np.ndarray, bins: int) -> "Histogram":
        counts, edges = np.histogram(np.asarray(values, dtype=np.float64), bins=bins)
        return cls(edges=edges, counts=counts.astype(np.int64))


@dataclass(frozen=True)
class NeighborhoodDiagnostics:
    """Histograms for choosing r (disk occupancy) and k (k-th neighbour distance)."""

    disk_counts: Histogram
    kth_distances: Histogram
    max_kth_distance: float
    r: float
    k: int
    median_disk_count: float
