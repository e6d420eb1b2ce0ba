"""
Core domain records for spatial single-cell data.

A Dataset is stored column-wise (numpy arrays) so neighbourhood queries can be
vectorized; :attr:`Dataset.cells` materializes :class:`CellRecord` objects on demand.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from community_explorer.errors import DuplicateCellId


def cell_sort_key(cell_id: str) -> Tuple[int, int, str]:
    """Sort key for cell identifiers.

    Identifiers made only of digits sort numerically and come first; all other
    identifiers sort lexicographically after them.

    Args:
        cell_id: Cell identifier

    Returns:
        Tuple usable as a sort key
    """
    if cell_id.isdigit():
        return (0, int(cell_id), "")
    return (1, 0, cell_id)


@dataclass(frozen=True)
class CellRecord:
    """One spatially located, typed cell."""

    cell_id: str
    sample_id: str
    x: float
    y: float
    cell_type: int  # index into the CellTypeRegistry
    fov_id: Optional[str] = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Cell {self.cell_id} has non-finite coordinates")


@dataclass(frozen=True)
class CellTypeRegistry:
    """Ordered, distinct cell-type names; the order defines composition columns."""

    names: Tuple[str, ...]

    def __post_init__(self) -> None:
        if any(not name for name in self.names):
            raise ValueError("Cell-type names must be non-empty")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Cell-type names must be distinct: {self.names}")

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "CellTypeRegistry":
        """Build a registry from arbitrary names, sorted lexicographically."""
        return cls(tuple(sorted(set(names))))

    @property
    def m(self) -> int:
        """Number of cell types."""
        return len(self.names)

    def index(self, name: str) -> int:
        """Column index of a cell-type name (raises ValueError if unknown)."""
        return self.names.index(name)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable collection of cells grouped by sample (and FOV).

    Attributes:
        cell_ids: Cell identifiers, unique
        sample_ids: Sample identifier per cell
        fov_ids: FOV identifier per cell, or None when FOVs are absent
        x: x coordinate per cell (µm)
        y: y coordinate per cell (µm)
        cell_types: Registry index per cell
        registry: Cell-type registry
        samples: Ordered sample identifiers
    """

    cell_ids: np.ndarray
    sample_ids: np.ndarray
    fov_ids: Optional[np.ndarray]
    x: np.ndarray
    y: np.ndarray
    cell_types: np.ndarray
    registry: CellTypeRegistry
    samples: Tuple[str, ...]
    _id_index: Dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        n = len(self.cell_ids)
        for name in ("sample_ids", "x", "y", "cell_types"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"Column {name} has {len(getattr(self, name))} entries, expected {n}")
        if self.fov_ids is not None and len(self.fov_ids) != n:
            raise ValueError("Column fov_ids has the wrong length")
        if n and not (np.isfinite(self.x).all() and np.isfinite(self.y).all()):
            raise ValueError("Coordinates must be finite")
        if n and (self.cell_types.min() < 0 or self.cell_types.max() >= self.registry.m):
            raise ValueError("Cell type index outside the registry")
        unknown = set(self.sample_ids.tolist()) - set(self.samples)
        if unknown:
            raise ValueError(f"Cells reference unknown samples: {sorted(unknown)}")

        index: Dict[str, int] = {}
        for i, cell_id in enumerate(self.cell_ids.tolist()):
            if cell_id in index:
                raise DuplicateCellId(
                    f"Duplicate cell_id {cell_id!r}", {"cell_id": cell_id}
                )
            index[cell_id] = i
        object.__setattr__(self, "_id_index", index)

    @classmethod
    def from_records(
        cls,
        cells: Sequence[CellRecord],
        registry: CellTypeRegistry,
        samples: Optional[Sequence[str]] = None,
    ) -> "Dataset":
        """Build a Dataset from CellRecord objects.

        Args:
            cells: Cell records
            registry: Cell-type registry the records index into
            samples: Sample order (default: order of first appearance)

        Returns:
            Dataset
        """
        if samples is None:
            samples = list(dict.fromkeys(c.sample_id for c in cells))
        has_fov = any(c.fov_id is not None for c in cells)
        return cls(
            cell_ids=np.array([c.cell_id for c in cells], dtype=object),
            sample_ids=np.array([c.sample_id for c in cells], dtype=object),
            fov_ids=np.array([c.fov_id for c in cells], dtype=object) if has_fov else None,
            x=np.array([c.x for c in cells], dtype=np.float64),
            y=np.array([c.y for c in cells], dtype=np.float64),
            cell_types=np.array([c.cell_type for c in cells], dtype=np.int64),
            registry=registry,
            samples=tuple(samples),
        )

    @property
    def n(self) -> int:
        """Total number of cells N."""
        return len(self.cell_ids)

    @property
    def m(self) -> int:
        """Number of cell types."""
        return self.registry.m

    @property
    def q(self) -> int:
        """Number of samples."""
        return len(self.samples)

    @property
    def has_fov(self) -> bool:
        return self.fov_ids is not None

    @property
    def cells(self) -> Iterator[CellRecord]:
        """Iterate over the cells as CellRecord objects."""
        for i in range(self.n):
            yield self.record(i)

    def record(self, i: int) -> CellRecord:
        """CellRecord for the i-th cell."""
        return CellRecord(
            cell_id=self.cell_ids[i],
            sample_id=self.sample_ids[i],
            x=float(self.x[i]),
            y=float(self.y[i]),
            cell_type=int(self.cell_types[i]),
            fov_id=None if self.fov_ids is None else self.fov_ids[i],
        )

    def index_of(self, cell_id: str) -> int:
        """Row position of a cell_id (KeyError if absent)."""
        return self._id_index[cell_id]

    def indices_of(self, cell_ids: Iterable[str]) -> np.ndarray:
        """Row positions for several cell_ids."""
        return np.array([self._id_index[c] for c in cell_ids], dtype=np.int64)

    def sample_sizes(self) -> Dict[str, int]:
        """N_j per sample, in sample order."""
        values, counts = np.unique(self.sample_ids.astype(str), return_counts=True)
        found = dict(zip(values.tolist(), counts.tolist()))
        return {s: int(found.get(s, 0)) for s in self.samples}

    def id_ranks(self) -> np.ndarray:
        """Rank of each cell under :func:`cell_sort_key` (0 = smallest id)."""
        order = sorted(range(self.n), key=lambda i: cell_sort_key(self.cell_ids[i]))
        ranks = np.empty(self.n, dtype=np.int64)
        ranks[np.array(order, dtype=np.int64)] = np.arange(self.n)
        return ranks

    def row_ranks(self) -> np.ndarray:
        """Rank of each cell under (sample order, fov id, cell_id)."""
        sample_pos = {s: j for j, s in enumerate(self.samples)}
        fovs = self.fov_ids if self.fov_ids is not None else [None] * self.n
        order = sorted(
            range(self.n),
            key=lambda i: (
                sample_pos[self.sample_ids[i]],
                cell_sort_key(fovs[i] or ""),
                cell_sort_key(self.cell_ids[i]),
            ),
        )
        ranks = np.empty(self.n, dtype=np.int64)
        ranks[np.array(order, dtype=np.int64)] = np.arange(self.n)
        return ranks

    def scopes(self, per_fov: bool) -> List[Tuple[Tuple[str, Optional[str]], np.ndarray]]:
        """Split cells into spatial scopes.

        A scope is one sample, or one (sample, fov) pair when ``per_fov`` is set.
        Scopes follow sample order, then FOV id order; member indices within a
        scope are ordered by cell_id.

        Args:
            per_fov: Split samples further by FOV

        Returns:
            List of ((sample, fov), member indices)
        """
        if per_fov and self.fov_ids is None:
            raise ValueError("per-FOV scope requested but the dataset has no FOV column")
        ranks = self.id_ranks()
        groups: Dict[Tuple[str, Optional[str]], List[int]] = {}
        for i in range(self.n):
            fov = self.fov_ids[i] if per_fov else None
            groups.setdefault((self.sample_ids[i], fov), []).append(i)

        sample_pos = {s: j for j, s in enumerate(self.samples)}
        keys = sorted(
            groups,
            key=lambda key: (sample_pos[key[0]], cell_sort_key(key[1] or "")),
        )
        scopes = []
        for key in keys:
            members = np.array(groups[key], dtype=np.int64)
            scopes.append((key, members[np.argsort(ranks[members], kind="stable")]))
        return scopes

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        if self.registry != other.registry or self.samples != other.samples:
            return False
        if (self.fov_ids is None) != (other.fov_ids is None):
            return False
        same_fov = self.fov_ids is None or np.array_equal(self.fov_ids, other.fov_ids)
        return (
            same_fov
            and np.array_equal(self.cell_ids, other.cell_ids)
            and np.array_equal(self.sample_ids, other.sample_ids)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.cell_types, other.cell_types)
        )

    def __len__(self) -> int:
        return self.n
