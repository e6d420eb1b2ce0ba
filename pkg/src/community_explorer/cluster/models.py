"""
Data models for clustering results.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class Partition:
    """Cluster labels aligned with row order; labels are 0..k-1, none empty."""

    labels: np.ndarray
    k: int

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if labels.size and (labels.min() < 0 or labels.max() >= self.k):
            raise ValueError(f"labels must lie in [0, {self.k})")
        if labels.size and np.unique(labels).size != self.k:
            raise ValueError("every cluster of a Partition must be non-empty")

    @classmethod
    def from_labels(cls, labels: np.ndarray) -> "Partition":
        """Relabel arbitrary labels densely in order of first appearance."""
        labels = np.asarray(labels)
        _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(first.size, dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(first.size)
        return cls(labels=rank[inverse.reshape(-1)], k=int(first.size))

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)

    def __len__(self) -> int:
        return int(self.labels.size)


@dataclass(frozen=True)
class KMeansOptions:
    """Lloyd k-means settings."""

    max_iter: int = 300
    tol: float = 1e-6
    restarts: int = 10

    def __post_init__(self) -> None:
        if self.max_iter < 1 or self.restarts < 1:
            raise ValueError("max_iter and restarts must be >= 1")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")

    def as_dict(self) -> Dict[str, Any]:
        return {"max_iter": self.max_iter, "tol": self.tol, "restarts": self.restarts}


@dataclass(frozen=True, eq=False)
class KMeansResult:
    """Best-of-restarts Lloyd solution.

    Attributes:
        partition: Final labels
        centroids: (k, m) cluster means
        wcss: Within-cluster sum of squares
        iterations: Lloyd iterations of the winning restart
        restarts_used: Number of restarts run
        seed: Seed the run was derived from
        restart: Index of the winning restart
        history: wcss after every iteration of the winning restart
    """

    partition: Partition
    centroids: np.ndarray
    wcss: float
    iterations: int
    restarts_used: int
    seed: int
    restart: int = 0
    history: Tuple[float, ...] = ()

    @property
    def labels(self) -> np.ndarray:
        return self.partition.labels

    @property
    def k(self) -> int:
        return self.partition.k


@dataclass(frozen=True)
class Merge:
    """One Ward merge: nodes a < b joined into a new node at ``height``."""

    a: int
    b: int
    height: float
    weight: float


@dataclass(eq=False)
class Dendrogram:
    """Weighted Ward merge tree.

    Leaves are nodes 0..L-1; the i-th merge creates node L + i. The root is the
    last node created (or leaf 0 when there is a single leaf).

    Attributes:
        centroids: (L, m) leaf centroids
        weights: Leaf weights (member counts)
        members: Row ids of each leaf
        merges: Merge sequence in creation order
    """

    centroids: np.ndarray
    weights: np.ndarray
    members: List[np.ndarray]
    merges: List[Merge] = field(default_factory=list)

    @property
    def n_leaves(self) -> int:
        return int(len(self.weights))

    @property
    def root(self) -> int:
        return self.n_leaves + len(self.merges) - 1

    def is_leaf(self, node: int) -> bool:
        return node < self.n_leaves

    def children(self, node: int) -> Optional[Tuple[int, int]]:
        """Children of an internal node, or None for a leaf."""
        if self.is_leaf(node):
            return None
        merge = self.merges[node - self.n_leaves]
        return merge.a, merge.b

    def height(self, node: int) -> float:
        return 0.0 if self.is_leaf(node) else self.merges[node - self.n_leaves].height

    def leaves_under(self, node: int) -> List[int]:
        """Leaf ids below a node, left subtree first."""
        stack, out = [node], []
        while stack:
            current = stack.pop()
            pair = self.children(current)
            if pair is None:
                out.append(current)
            else:
                stack.extend((pair[1], pair[0]))
        return out

    def members_of(self, node: int) -> np.ndarray:
        """Row ids covered by a node."""
        parts = [self.members[leaf] for leaf in self.leaves_under(node)]
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)

    def weight(self, node: int) -> float:
        if self.is_leaf(node):
            return float(self.weights[node])
        return self.merges[node - self.n_leaves].weight

    def to_linkage(self) -> np.ndarray:
        """Merges as (a, b, height, weight) rows, scipy linkage layout."""
        if not self.merges:
            return np.empty((0, 4))
        return np.array([[m.a, m.b, m.height, m.weight] for m in self.merges], dtype=np.float64)


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a k-selection rule.

    Attributes:
        method: "elbow" or "gap"
        k: Selected k, or None when the rule is not met in the range (NA)
        ks: Candidate k values
        statistic: wcss (elbow) or Gap(k) per candidate
        spread: s_k per candidate (gap only)
    """

    method: str
    k: Optional[int]
    ks: Tuple[int, ...]
    statistic: Tuple[float, ...]
    spread: Tuple[float, ...] = ()

    def curve(self) -> Dict[int, float]:
        return dict(zip(self.ks, self.statistic))
