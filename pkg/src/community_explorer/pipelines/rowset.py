"""
Uniform access to the rows a pipeline clusters and the cells they belong to.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from community_explorer.neighborhood.models import CompositionMatrix
from community_explorer.pipelines.models import CommunityAssignment
from community_explorer.transform import LogRatioMatrix

Rows = Union[np.ndarray, CompositionMatrix, LogRatioMatrix, "RowSet"]


@dataclass(frozen=True, eq=False)
class RowSet:
    matrix: np.ndarray
    cell_ids: np.ndarray
    samples: Optional[np.ndarray] = None
    fovs: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])


def as_rowset(rows: Rows) -> RowSet:
    """Wrap a bare matrix (cells named by row position) or a composition."""
    if isinstance(rows, RowSet):
        return rows
    if isinstance(rows, LogRatioMatrix):
        source = rows.source
        if source is None:
            return as_rowset(rows.rows)
        return RowSet(rows.rows, source.row_cells, source.row_samples, source.row_fovs)
    if isinstance(rows, CompositionMatrix):
        return RowSet(rows.rows, rows.row_cells, rows.row_samples, rows.row_fovs)
    matrix = np.asarray(rows, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError(f"rows must be a 2-D matrix, got shape {matrix.shape}")
    ids = np.array([str(i) for i in range(matrix.shape[0])], dtype=object)
    return RowSet(matrix, ids)


def labels_from_groups(groups: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Label rows by the position of the group holding them; groups must cover 0..n-1 once."""
    labels = np.full(n, -1, dtype=np.int64)
    for index, members in enumerate(groups):
        labels[members] = index
    if np.any(labels < 0):
        raise RuntimeError("community groups do not cover every row")
    return labels


def assignment_for(
    rowset: RowSet,
    labels: np.ndarray,
    method: str,
    config: Dict[str, Any],
    seed: Optional[int],
) -> CommunityAssignment:
    return CommunityAssignment(
        cell_ids=rowset.cell_ids,
        labels=labels,
        method=method,
        config=config,
        seed=seed,
        row_samples=rowset.samples,
        row_fovs=rowset.fovs,
    )

