"""
Tabular ingestion of spatial cell data.

Reads delimiter-separated text with polars (all columns as strings first, so
parse failures can be reported with their data-row number) and builds an
immutable :class:`Dataset`.
"""

import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Optional, Union

import numpy as np
import polars as pl
from polars.exceptions import NoDataError

from community_explorer.data.models import CellTypeRegistry, Dataset
from community_explorer.errors import EmptyInput, MissingColumn, ParseError

logger = logging.getLogger(__name__)

Source = Union[str, Path, bytes, BinaryIO]


@dataclass(frozen=True)
class CellSchema:
    """Maps column roles to column names.

    ``sample``, ``x``, ``y`` and ``cell_type`` are required; ``fov`` and
    ``cell_id`` are optional and may be absent from the file.
    """

    sample: str = "sample"
    x: str = "x"
    y: str = "y"
    cell_type: str = "cell_type"
    fov: Optional[str] = "fov"
    cell_id: Optional[str] = "cell_id"
    separator: str = ","

    def required(self) -> dict[str, str]:
        return {"sample": self.sample, "x": self.x, "y": self.y, "cell_type": self.cell_type}


def _read_frame(source: Source, separator: str) -> pl.DataFrame:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(source)
    try:
        return pl.read_csv(
            source,
            separator=separator,
            infer_schema_length=0,
            encoding="utf8",
        )
    except NoDataError as e:
        raise EmptyInput("Input has no header or data rows") from e


def _parse_coordinate(frame: pl.DataFrame, column: str) -> np.ndarray:
    raw = frame.get_column(column)
    parsed = raw.str.strip_chars().cast(pl.Float64, strict=False)
    bad = parsed.is_null() | ~parsed.is_finite().fill_null(False)
    if bad.any():
        row = int(bad.arg_true()[0]) + 1
        raise ParseError(
            f"Row {row}: column {column!r} value {raw[row - 1]!r} is not a finite number",
            row=row,
            column=column,
        )
    return parsed.to_numpy().astype(np.float64)


def ingest_cells(source: Source, schema: Optional[CellSchema] = None) -> Dataset:
    """Read cells from delimiter-separated text with a header row.

    The registry is built from the distinct cell-type names sorted
    lexicographically. A missing cell_id column is replaced by the 1-based data
    row ordinal. Samples are ordered by first appearance.

    Args:
        source: Path, raw bytes or binary stream
        schema: Column-role mapping (default: canonical names, comma separator)

    Returns:
        Dataset with one cell per data row

    Raises:
        MissingColumn: A required role's column is absent
        ParseError: A coordinate is not a finite number, or a type/sample is empty
        EmptyInput: No data rows
        DuplicateCellId: Two rows share one cell_id
    """
    schema = schema or CellSchema()
    frame = _read_frame(source, schema.separator)

    for role, column in schema.required().items():
        if column not in frame.columns:
            raise MissingColumn(
                f"Column {column!r} for role {role!r} not found (columns: {frame.columns})",
                {"role": role, "column": column},
            )
    if frame.height == 0:
        raise EmptyInput("Input has a header but no data rows")

    x = _parse_coordinate(frame, schema.x)
    y = _parse_coordinate(frame, schema.y)

    for role in ("sample", "cell_type"):
        column = getattr(schema, role)
        values = frame.get_column(column)
        empty = values.is_null() | (values.str.strip_chars() == "")
        if empty.any():
            row = int(empty.arg_true()[0]) + 1
            raise ParseError(f"Row {row}: empty {role} value", row=row, column=column)

    type_names = frame.get_column(schema.cell_type).to_list()
    registry = CellTypeRegistry.from_names(type_names)
    lookup = {name: i for i, name in enumerate(registry.names)}
    cell_types = np.array([lookup[name] for name in type_names], dtype=np.int64)

    if schema.cell_id and schema.cell_id in frame.columns:
        cell_ids = np.array(frame.get_column(schema.cell_id).to_list(), dtype=object)
    else:
        cell_ids = np.array([str(i) for i in range(1, frame.height + 1)], dtype=object)

    fov_ids = None
    if schema.fov and schema.fov in frame.columns:
        fov_ids = np.array(frame.get_column(schema.fov).fill_null("").to_list(), dtype=object)

    sample_ids = np.array(frame.get_column(schema.sample).to_list(), dtype=object)
    samples = tuple(dict.fromkeys(sample_ids.tolist()))

    dataset = Dataset(
        cell_ids=cell_ids,
        sample_ids=sample_ids,
        fov_ids=fov_ids,
        x=x,
        y=y,
        cell_types=cell_types,
        registry=registry,
        samples=samples,
    )
    logger.info(
        f"Ingested {dataset.n:,} cells, {dataset.q} samples, {dataset.m} cell types"
    )
    return dataset


def dataset_summary(dataset: Dataset) -> pl.DataFrame:
    """Per-sample summary table (sample, size, fov_count) in sample order."""
    sizes = dataset.sample_sizes()
    fov_counts = {s: 0 for s in dataset.samples}
    if dataset.fov_ids is not None:
        pairs = set(zip(dataset.sample_ids.tolist(), dataset.fov_ids.tolist()))
        for sample, _ in pairs:
            fov_counts[sample] += 1
    return pl.DataFrame(
        {
            "sample": list(dataset.samples),
            "size": [sizes[s] for s in dataset.samples],
            "fov_count": [fov_counts[s] for s in dataset.samples],
        },
        schema={"sample": pl.String, "size": pl.Int64, "fov_count": pl.Int64},
    )
