"""
Centered log-ratio transform of composition rows with explicit zero handling.

Zero entries get a per-row pseudo-count δ = δ_frac / n_i and the nonzero
entries are scaled multiplicatively so the row still sums to 1; the log-ratio
step then maps each row onto the zero-sum hyperplane.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from community_explorer.errors import AllZeroRow
from community_explorer.neighborhood.models import CompositionMatrix

logger = logging.getLogger(__name__)

PROVENANCE_TRANSFORMED = "transformed"
PROVENANCE_IDENTITY = "identity"


@dataclass(frozen=True)
class ZeroPolicy:
    """How zero fractions are handled before taking logs.

    Attributes:
        kind: "pseudo_count" or "skip" (skip leaves rows untransformed)
        delta_frac: Pseudo-count numerator; zeros become delta_frac / n_i
    """

    kind: str = "pseudo_count"
    delta_frac: float = 0.5

    def __post_init__(self) -> None:
        if self.kind not in ("pseudo_count", "skip"):
            raise ValueError(f"Unknown zero policy {self.kind!r}")
        if not 0 < self.delta_frac <= 1:
            raise ValueError(f"delta_frac must be in (0, 1], got {self.delta_frac}")

    @classmethod
    def parse(cls, value: Union[str, "ZeroPolicy", None]) -> "ZeroPolicy":
        """Accept a policy, a policy name, or the pipeline names clr / skip."""
        if isinstance(value, cls):
            return value
        if value is None or value in ("clr", "pseudo_count", "pseudo-count"):
            return cls()
        return cls(kind=str(value))


@dataclass(frozen=True, eq=False)
class LogRatioMatrix:
    """Transformed rows plus the composition they came from.

    Attributes:
        rows: (n_rows, m) reals
        provenance: "transformed" or "identity"
        zero_policy: Policy applied
        source: The input CompositionMatrix (row back-references, counts)
    """

    rows: np.ndarray
    provenance: str
    zero_policy: ZeroPolicy
    source: Optional[CompositionMatrix] = None

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    def __len__(self) -> int:
        return self.n_rows


def replace_zeros(rows: np.ndarray, totals: np.ndarray, delta_frac: float = 0.5) -> np.ndarray:
    """Multiplicative zero replacement.

    Zeros in row i become δ_i = delta_frac / n_i and nonzero entries are scaled by
    (1 - z_i·δ_i), where z_i is the row's zero count. When a row holds fewer cells
    than zero entries plus one, δ_i shrinks to delta_frac / (z_i + 1) so the
    scaled entries stay positive.

    Args:
        rows: (n, m) fractions summing to 1 per row
        totals: n_i per row (k for kNN rows)
        delta_frac: Pseudo-count numerator

    Returns:
        Strictly positive rows summing to 1
    """
    rows = np.asarray(rows, dtype=np.float64)
    totals = np.asarray(totals, dtype=np.float64)
    zeros = rows <= 0
    z = zeros.sum(axis=1)
    delta = delta_frac / np.maximum(totals, z + 1)
    scaled = rows * (1.0 - z * delta)[:, None]
    return np.where(zeros, delta[:, None], scaled)


def clr(rows: np.ndarray) -> np.ndarray:
    """Centered log-ratio of strictly positive rows."""
    logs = np.log(rows)
    return logs - logs.mean(axis=1, keepdims=True)


def clr_transform(
    composition: CompositionMatrix,
    zero_policy: Union[str, ZeroPolicy, None] = None,
) -> LogRatioMatrix:
    """Map composition rows from the simplex to Euclidean space.

    Args:
        composition: Disk or kNN composition matrix (m >= 2)
        zero_policy: ZeroPolicy, "pseudo_count" (default) or "skip"

    Returns:
        LogRatioMatrix; with skip the rows are passed through and flagged identity

    Raises:
        AllZeroRow: A row has zero total count
        ValueError: Fewer than two cell types
    """
    policy = ZeroPolicy.parse(zero_policy)
    if composition.m < 2:
        raise ValueError(f"Log-ratio transform needs m >= 2 cell types, got {composition.m}")

    row_sums = composition.rows.sum(axis=1)
    empty = np.flatnonzero((composition.counts <= 0) | (row_sums <= 0))
    if empty.size:
        i = int(empty[0])
        raise AllZeroRow(
            f"Row {i} (cell {composition.row_cells[i]}) has zero total count",
            {"row": i, "cell_id": str(composition.row_cells[i])},
        )

    if policy.kind == "skip":
        logger.info("Log-ratio transform skipped; rows passed through unchanged")
        return LogRatioMatrix(
            rows=composition.rows.copy(),
            provenance=PROVENANCE_IDENTITY,
            zero_policy=policy,
            source=composition,
        )

    positive = replace_zeros(composition.rows, composition.counts, policy.delta_frac)
    rows = clr(positive)
    logger.info(f"CLR transform applied to {composition.n_rows:,} rows")
    return LogRatioMatrix(
        rows=rows,
        provenance=PROVENANCE_TRANSFORMED,
        zero_policy=policy,
        source=composition,
    )
