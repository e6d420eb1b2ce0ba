"""
Uniform-grid spatial index for fixed-radius and k-nearest-neighbour queries.

Cells are hashed into square buckets keyed by ``(floor(x / s), floor(y / s))``.
Queries gather the buckets overlapping the query rectangle and filter candidates
by exact squared Euclidean distance, so results are exact, not approximate.
Batch queries work one bucket of centers at a time, which keeps the distance
matrices small and the work vectorized.
"""

import logging
import math
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from community_explorer.data.models import CellRecord
from community_explorer.errors import EmptyScope

logger = logging.getLogger(__name__)

BucketKey = Tuple[int, int]


class SpatialIndex:
    """Grid of buckets over one scope of cells.

    Attributes:
        x: x coordinates of the indexed cells
        y: y coordinates of the indexed cells
        ids: Caller-side identifiers (e.g. dataset row positions) per indexed cell
        bucket_size: Edge length s of a bucket
    """

    def __init__(
        self,
        x: np.ndarray,
        y: np.ndarray,
        bucket_size: float,
        ids: Optional[np.ndarray] = None,
    ):
        if bucket_size <= 0 or not math.isfinite(bucket_size):
            raise ValueError(f"bucket_size must be positive, got {bucket_size}")
        self.x = np.asarray(x, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.float64)
        if self.x.size == 0:
            raise EmptyScope("Cannot build a spatial index over zero cells")
        self.ids = np.arange(self.x.size) if ids is None else np.asarray(ids)
        self.bucket_size = float(bucket_size)

        bx = np.floor(self.x / self.bucket_size).astype(np.int64)
        by = np.floor(self.y / self.bucket_size).astype(np.int64)
        self.order = np.lexsort((by, bx))
        keys = np.stack([bx[self.order], by[self.order]], axis=1)
        change = np.ones(len(keys), dtype=bool)
        change[1:] = np.any(keys[1:] != keys[:-1], axis=1)
        starts = np.flatnonzero(change)
        ends = np.append(starts[1:], len(keys))

        self.keys = keys[starts]
        self.buckets: Dict[BucketKey, Tuple[int, int]] = {
            (int(kx), int(ky)): (int(s), int(e))
            for (kx, ky), s, e in zip(self.keys, starts, ends)
        }
        self.key_min = self.keys.min(axis=0)
        self.key_max = self.keys.max(axis=0)
        logger.debug(
            f"Indexed {self.x.size:,} cells into {len(self.buckets):,} buckets "
            f"(s={self.bucket_size:g})"
        )

    def __len__(self) -> int:
        return int(self.x.size)

    def iter_buckets(self) -> Iterator[Tuple[BucketKey, np.ndarray]]:
        """Yield (bucket key, local positions of the cells in it)."""
        for key, (start, end) in self.buckets.items():
            yield key, self.order[start:end]

    def candidates(self, xlo: float, xhi: float, ylo: float, yhi: float) -> np.ndarray:
        """Local positions of all cells in buckets overlapping a rectangle."""
        s = self.bucket_size
        bx0 = max(math.floor(xlo / s), int(self.key_min[0]))
        bx1 = min(math.floor(xhi / s), int(self.key_max[0]))
        by0 = max(math.floor(ylo / s), int(self.key_min[1]))
        by1 = min(math.floor(yhi / s), int(self.key_max[1]))
        if bx0 > bx1 or by0 > by1:
            return np.empty(0, dtype=np.int64)

        if (bx1 - bx0 + 1) * (by1 - by0 + 1) <= len(self.buckets):
            slices = [
                self.buckets[(kx, ky)]
                for kx in range(bx0, bx1 + 1)
                for ky in range(by0, by1 + 1)
                if (kx, ky) in self.buckets
            ]
        else:
            inside = (
                (self.keys[:, 0] >= bx0)
                & (self.keys[:, 0] <= bx1)
                & (self.keys[:, 1] >= by0)
                & (self.keys[:, 1] <= by1)
            )
            slices = [self.buckets[(int(kx), int(ky))] for kx, ky in self.keys[inside]]
        if not slices:
            return np.empty(0, dtype=np.int64)
        return np.concatenate([self.order[s:e] for s, e in slices])

    def radius_query(self, qx: float, qy: float, r: float) -> np.ndarray:
        """Identifiers of all cells within distance r of (qx, qy), ascending.

        Membership is ``dx*dx + dy*dy <= r*r``.
        """
        if r < 0:
            raise ValueError(f"radius must be non-negative, got {r}")
        cand = self.candidates(qx - r, qx + r, qy - r, qy + r)
        dx = self.x[cand] - qx
        dy = self.y[cand] - qy
        hits = cand[dx * dx + dy * dy <= r * r]
        return np.sort(self.ids[hits])

    def count_within(
        self,
        centers: np.ndarray,
        r: float,
        labels: np.ndarray,
        n_labels: int,
    ) -> np.ndarray:
        """Per-label counts of cells within r of each center.

        Args:
            centers: Local positions of the query centers
            r: Radius (the center itself counts, distance 0)
            labels: Integer label per indexed cell
            n_labels: Number of distinct labels

        Returns:
            Array (len(centers), n_labels) of counts, rows aligned with ``centers``
        """
        out = np.zeros((len(centers), n_labels), dtype=np.int64)
        if len(centers) == 0:
            return out
        onehot = np.eye(n_labels, dtype=np.int64)
        wanted = np.zeros(len(self), dtype=bool)
        wanted[centers] = True
        slot = np.full(len(self), -1, dtype=np.int64)
        slot[centers] = np.arange(len(centers))
        r2 = r * r

        for _, members in self.iter_buckets():
            batch = members[wanted[members]]
            if batch.size == 0:
                continue
            bxs, bys = self.x[batch], self.y[batch]
            cand = self.candidates(bxs.min() - r, bxs.max() + r, bys.min() - r, bys.max() + r)
            dx = bxs[:, None] - self.x[cand][None, :]
            dy = bys[:, None] - self.y[cand][None, :]
            within = (dx * dx + dy * dy <= r2).astype(np.int64)
            out[slot[batch]] = within @ onehot[labels[cand]]
        return out

    def knn(
        self, k: int, ranks: np.ndarray, centers: Optional[np.ndarray] = None
    ) -> Tuple[np.ndarray, np.ndarray]:
        """k nearest other cells for indexed cells.

        The center itself is excluded; ties at equal distance go to the smaller
        rank. The search rectangle grows one bucket at a time until the k-th
        distance is strictly inside it, which makes the result exact.

        Args:
            k: Neighbour count (the index must hold more than k cells)
            ranks: Tie-break rank per indexed cell
            centers: Local positions to query (default: every indexed cell)

        Returns:
            (neighbours, kth_distance): local positions (len(centers), k) sorted by
            (distance, rank), and the distance to the k-th neighbour
        """
        n = len(self)
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if n <= k:
            raise ValueError(f"kNN needs more than k={k} cells, index has {n}")
        centers = np.arange(n) if centers is None else np.asarray(centers, dtype=np.int64)
        wanted = np.zeros(n, dtype=bool)
        wanted[centers] = True
        neighbours = np.empty((n, k), dtype=np.int64)
        kth = np.empty(n, dtype=np.float64)
        s = self.bucket_size
        span = int(max(self.key_max[0] - self.key_min[0], self.key_max[1] - self.key_min[1]))

        for _, members in self.iter_buckets():
            pending = members[wanted[members]]
            h = 1
            while pending.size:
                px, py = self.x[pending], self.y[pending]
                reach = h * s
                exhaustive = h > span
                cand = self.candidates(
                    px.min() - reach, px.max() + reach, py.min() - reach, py.max() + reach
                )
                if cand.size <= k and not exhaustive:
                    h += 1
                    continue
                dx = px[:, None] - self.x[cand][None, :]
                dy = py[:, None] - self.y[cand][None, :]
                d2 = dx * dx + dy * dy
                d2[pending[:, None] == cand[None, :]] = np.inf
                tie = np.broadcast_to(ranks[cand][None, :], d2.shape)
                order = np.lexsort((tie, d2), axis=1)[:, :k]
                kth_d2 = d2[np.arange(len(pending)), order[:, k - 1]]
                done = np.ones(len(pending), dtype=bool) if exhaustive else kth_d2 < reach * reach
                neighbours[pending[done]] = cand[order[done]]
                kth[pending[done]] = np.sqrt(kth_d2[done])
                pending = pending[~done]
                h += 1
        return neighbours[centers], kth[centers]


def suggest_bucket_size(x: np.ndarray, y: np.ndarray, per_bucket: float) -> float:
    """Bucket edge holding roughly ``per_bucket`` cells at the scope's mean density."""
    width = float(np.ptp(x)) if x.size else 0.0
    height = float(np.ptp(y)) if y.size else 0.0
    area = width * height
    if area <= 0.0:
        extent = max(width, height)
        return extent / max(len(x) / per_bucket, 1.0) if extent > 0 else 1.0
    return math.sqrt(area * per_bucket / len(x))


def build_index(cells: Sequence[CellRecord], bucket_size: float) -> SpatialIndex:
    """Build a spatial index over CellRecord objects.

    Identifiers returned by queries are the cells' positions in ``cells``.

    Args:
        cells: Cells of one scope
        bucket_size: Bucket edge length s > 0 (typically the query radius)

    Returns:
        SpatialIndex

    Raises:
        EmptyScope: No cells
    """
    if len(cells) == 0:
        raise EmptyScope("Cannot build a spatial index over zero cells")
    x = np.array([c.x for c in cells], dtype=np.float64)
    y = np.array([c.y for c in cells], dtype=np.float64)
    return SpatialIndex(x, y, bucket_size)
