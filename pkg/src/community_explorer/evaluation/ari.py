"""
Adjusted Rand index from the contingency table.
"""

import logging
from typing import Union

import numpy as np
from scipy.special import comb

from community_explorer.cluster.models import Partition
from community_explorer.errors import LengthMismatch
from community_explorer.evaluation.models import AriReport
from community_explorer.pipelines.models import CommunityAssignment

logger = logging.getLogger(__name__)

Labels = Union[Partition, np.ndarray]


def _labels(p: Labels) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def contingency_table(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Counts n_ij of elements in cluster i of ``a`` and cluster j of ``b``."""
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    table = np.zeros((ia.max() + 1, ib.max() + 1), dtype=np.int64)
    np.add.at(table, (ia.reshape(-1), ib.reshape(-1)), 1)
    return table


def ari(p1: Labels, p2: Labels) -> AriReport:
    """Hubert-Arabie adjusted Rand index: (Index − Expected) / (Max − Expected).

    When Max equals Expected the partitions are identical and 1 is returned.

    Raises:
        LengthMismatch: The partitions label different numbers of elements
    """
    a, b = _labels(p1), _labels(p2)
    if a.size != b.size:
        raise LengthMismatch(
            f"Partitions have {a.size} and {b.size} elements",
            {"first": int(a.size), "second": int(b.size)},
        )
    if a.size == 0:
        raise LengthMismatch("Partitions are empty", {"first": 0, "second": 0})

    table = contingency_table(a, b)
    index = float(comb(table, 2).sum())
    sum_a = float(comb(table.sum(axis=1), 2).sum())
    sum_b = float(comb(table.sum(axis=0), 2).sum())
    pairs = float(comb(a.size, 2))
    expected = sum_a * sum_b / pairs if pairs else 0.0
    max_index = 0.5 * (sum_a + sum_b)
    denominator = max_index - expected
    value = 1.0 if denominator == 0 else (index - expected) / denominator
    return AriReport(
        ari=float(value),
        n=int(a.size),
        index=index,
        expected=expected,
        max_index=max_index,
        rows=int(table.shape[0]),
        columns=int(table.shape[1]),
    )


def ari_assignments(detected: CommunityAssignment, truth: CommunityAssignment) -> AriReport:
    """ARI over the cells labeled by both assignments, matched by cell_id.

    Raises:
        LengthMismatch: The assignments share no cell
    """
    truth_labels = truth.labels_by_cell()
    common = [i for i, cell in enumerate(detected.cell_ids.tolist()) if cell in truth_labels]
    if not common:
        raise LengthMismatch("Assignments share no cell_id", {"first": len(detected), "second": len(truth)})
    if len(common) < len(detected) or len(common) < len(truth):
        logger.info(f"ARI over {len(common):,} shared cells ({len(detected):,} detected, {len(truth):,} truth)")
    idx = np.array(common, dtype=np.int64)
    other = np.array([truth_labels[c] for c in detected.cell_ids[idx].tolist()], dtype=np.int64)
    return ari(detected.labels[idx], other)
