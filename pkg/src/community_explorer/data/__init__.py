"""
Data module: cell records, the cell-type registry and tabular ingestion.

- models: CellRecord, CellTypeRegistry, Dataset
- ingest: CSV ingestion and per-sample summaries
"""

from community_explorer.data.ingest import CellSchema, dataset_summary, ingest_cells
from community_explorer.data.models import (
    CellRecord,
    CellTypeRegistry,
    Dataset,
    cell_sort_key,
)

__all__ = [
    "CellRecord",
    "CellTypeRegistry",
    "Dataset",
    "CellSchema",
    "cell_sort_key",
    "dataset_summary",
    "ingest_cells",
]
