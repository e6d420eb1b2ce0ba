"""
CSV and JSON serialization of datasets, compositions, assignments and results.

Tables are written with polars; JSON documents use sorted keys and carry no
timestamps, so rerunning a command reproduces its files byte for byte.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

import numpy as np
import polars as pl

from community_explorer.cluster.models import Partition, SelectionResult
from community_explorer.data.models import CellTypeRegistry, Dataset
from community_explorer.errors import MissingColumn, ParseError
from community_explorer.evaluation.models import CommunityProfile, SampleFractionTable
from community_explorer.neighborhood.models import CompositionMatrix, Histogram
from community_explorer.pipelines.models import CommunityAssignment
from community_explorer.pipelines.rowset import RowSet
from community_explorer.transform import LogRatioMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

ID_COLUMNS = ("cell_id", "sample", "fov")
COMPOSITION_META = ("cell_id", "sample", "fov", "n_i")
PROVENANCE_PREFIX = "# provenance="


def _optional(values: Optional[np.ndarray], n: int) -> list:
    if values is None:
        return [None] * n
    return [v if v not in ("", None) else None for v in values.tolist()]


def _require(frame: pl.DataFrame, columns, path: PathLike) -> None:
    for column in columns:
        if column not in frame.columns:
            raise MissingColumn(
                f"{path}: column {column!r} not found (columns: {frame.columns})",
                {"column": column, "path": str(path)},
            )


def _fov_array(frame: pl.DataFrame) -> Optional[np.ndarray]:
    if "fov" not in frame.columns or frame.get_column("fov").null_count() == frame.height:
        return None
    return np.array(frame.get_column("fov").fill_null("").to_list(), dtype=object)


def _read_table(path: PathLike, comment_prefix: Optional[str] = None) -> pl.DataFrame:
    # Identifier columns stay strings, everything else is numeric
    frame = pl.read_csv(path, infer_schema_length=0, comment_prefix=comment_prefix)
    numeric = [c for c in frame.columns if c not in ID_COLUMNS]
    return frame.with_columns(pl.col(numeric).cast(pl.Float64))


# Cells


def write_cells(dataset: Dataset, path: PathLike) -> None:
    """Cells CSV: cell_id, sample, [fov,] x, y, cell_type."""
    data: Dict[str, Any] = {
        "cell_id": dataset.cell_ids.tolist(),
        "sample": dataset.sample_ids.tolist(),
    }
    if dataset.fov_ids is not None:
        data["fov"] = dataset.fov_ids.tolist()
    data["x"] = dataset.x
    data["y"] = dataset.y
    data["cell_type"] = [dataset.registry.names[t] for t in dataset.cell_types.tolist()]
    pl.DataFrame(data).write_csv(path)
    logger.debug(f"Wrote {dataset.n:,} cells to {path}")


# Compositions


def composition_frame(composition: CompositionMatrix) -> pl.DataFrame:
    n = composition.n_rows
    data: Dict[str, Any] = {
        "cell_id": composition.row_cells.tolist(),
        "sample": composition.row_samples.tolist(),
        "fov": pl.Series("fov", _optional(composition.row_fovs, n), dtype=pl.String),
        "n_i": composition.counts.astype(np.int64),
    }
    for j, name in enumerate(composition.registry.names):
        data[name] = composition.rows[:, j]
    return pl.DataFrame(data)


def write_composition(composition: CompositionMatrix, path: PathLike) -> None:
    """Composition CSV: cell_id, sample, fov, n_i, one fraction column per cell type."""
    composition_frame(composition).write_csv(path)
    logger.debug(f"Wrote {composition.n_rows:,} composition rows to {path}")


def read_composition(path: PathLike, variant: str = "disk") -> CompositionMatrix:
    """Read a composition CSV written by :func:`write_composition`.

    Raises:
        MissingColumn: A metadata column is absent
        ParseError: No cell-type columns follow the metadata
    """
    frame = _read_table(path)
    _require(frame, COMPOSITION_META, path)
    types = [c for c in frame.columns if c not in COMPOSITION_META]
    if not types:
        raise ParseError(f"{path}: no cell-type columns", row=0)
    counts = frame.get_column("n_i").to_numpy().astype(np.int64)
    parameter = float(counts[0]) if variant == "knn" and counts.size else None
    return CompositionMatrix(
        rows=frame.select(types).to_numpy().astype(np.float64),
        row_cells=np.array(frame.get_column("cell_id").to_list(), dtype=object),
        counts=counts,
        registry=CellTypeRegistry(tuple(types)),
        row_samples=np.array(frame.get_column("sample").to_list(), dtype=object),
        row_fovs=_fov_array(frame),
        variant=variant,
        parameter=parameter,
    )


def write_log_ratio(matrix: LogRatioMatrix, path: PathLike) -> None:
    """Log-ratio CSV: a ``# provenance=...`` line, then composition-shaped rows without n_i."""
    source = matrix.source
    n = matrix.n_rows
    if source is not None:
        names = list(source.registry.names)
        meta = {
            "cell_id": source.row_cells.tolist(),
            "sample": source.row_samples.tolist(),
            "fov": pl.Series("fov", _optional(source.row_fovs, n), dtype=pl.String),
        }
    else:
        names = [f"v{j + 1}" for j in range(matrix.rows.shape[1])]
        meta = {
            "cell_id": [str(i) for i in range(n)],
            "sample": pl.Series("sample", [None] * n, dtype=pl.String),
            "fov": pl.Series("fov", [None] * n, dtype=pl.String),
        }
    frame = pl.DataFrame({**meta, **{name: matrix.rows[:, j] for j, name in enumerate(names)}})
    with open(path, "w", encoding="utf8", newline="") as handle:
        handle.write(f"{PROVENANCE_PREFIX}{matrix.provenance}\n")
        frame.write_csv(handle)


def is_log_ratio_file(path: PathLike) -> bool:
    with open(path, encoding="utf8") as handle:
        return handle.readline().startswith(PROVENANCE_PREFIX)


def read_log_ratio(path: PathLike) -> Tuple[RowSet, str]:
    """Rows and provenance of a log-ratio CSV."""
    with open(path, encoding="utf8") as handle:
        first = handle.readline().strip()
    provenance = first[len(PROVENANCE_PREFIX):] if first.startswith(PROVENANCE_PREFIX) else "unknown"
    frame = _read_table(path, comment_prefix="#")
    _require(frame, ("cell_id",), path)
    values = [c for c in frame.columns if c not in ID_COLUMNS]
    samples = None
    if "sample" in frame.columns and frame.get_column("sample").null_count() < frame.height:
        samples = np.array(frame.get_column("sample").to_list(), dtype=object)
    rowset = RowSet(
        matrix=frame.select(values).to_numpy().astype(np.float64),
        cell_ids=np.array(frame.get_column("cell_id").to_list(), dtype=object),
        samples=samples,
        fovs=_fov_array(frame),
    )
    return rowset, provenance


# Assignments and partitions


def write_assignment(assignment: CommunityAssignment, path: PathLike) -> None:
    """Assignment CSV: cell_id, sample, fov, community."""
    n = len(assignment)
    pl.DataFrame(
        {
            "cell_id": assignment.cell_ids.tolist(),
            "sample": pl.Series("sample", _optional(assignment.row_samples, n), dtype=pl.String),
            "fov": pl.Series("fov", _optional(assignment.row_fovs, n), dtype=pl.String),
            "community": assignment.labels,
        }
    ).write_csv(path)


def read_assignment(path: PathLike, method: str = "loaded") -> CommunityAssignment:
    """Read an assignment CSV; community labels must be dense from 0."""
    frame = _read_table(path)
    _require(frame, ("cell_id", "community"), path)
    samples = None
    if "sample" in frame.columns and frame.get_column("sample").null_count() < frame.height:
        samples = np.array(frame.get_column("sample").to_list(), dtype=object)
    return CommunityAssignment(
        cell_ids=np.array(frame.get_column("cell_id").to_list(), dtype=object),
        labels=frame.get_column("community").to_numpy().astype(np.int64),
        method=method,
        row_samples=samples,
        row_fovs=_fov_array(frame),
    )


def write_partition(partition: Partition, path: PathLike) -> None:
    """Partition CSV: row_id, label."""
    pl.DataFrame(
        {"row_id": np.arange(len(partition), dtype=np.int64), "label": partition.labels}
    ).write_csv(path)


# Curves and histograms


def write_selection_curve(selection: SelectionResult, path: PathLike) -> None:
    """Curve CSV: k, statistic."""
    pl.DataFrame(
        {"k": list(selection.ks), "statistic": list(selection.statistic)},
        schema={"k": pl.Int64, "statistic": pl.Float64},
    ).write_csv(path)


def write_histogram(histogram: Histogram, path: PathLike) -> None:
    """Histogram CSV: bin_lower, bin_upper, count."""
    pl.DataFrame(
        {
            "bin_lower": histogram.edges[:-1],
            "bin_upper": histogram.edges[1:],
            "count": histogram.counts,
        }
    ).write_csv(path)


# Evaluation tables


def profile_frame(profile: CommunityProfile) -> pl.DataFrame:
    """Long-form profile: one row per (community, cell type)."""
    k, m = profile.percentages.shape
    return pl.DataFrame(
        {
            "community": np.repeat(np.arange(k, dtype=np.int64), m),
            "size": np.repeat(profile.sizes.astype(np.int64), m),
            "cell_type": list(profile.type_names) * k,
            "percent": profile.percentages.reshape(-1),
        }
    )


def write_profile(profile: CommunityProfile, path: PathLike) -> None:
    """Profile CSV: community, size, cell_type, percent."""
    profile_frame(profile).write_csv(path)


def fractions_frame(table: SampleFractionTable) -> pl.DataFrame:
    return pl.DataFrame(
        {
            "sample": list(table.samples),
            "x": table.x,
            "y": table.y,
            "k": table.k,
            "n": table.totals,
        },
        schema={"sample": pl.String, "x": pl.Float64, "y": pl.Int64, "k": pl.Int64, "n": pl.Int64},
    )


def write_fractions(table: SampleFractionTable, path: PathLike) -> None:
    """Fraction table CSV: sample, x, y, k, n."""
    fractions_frame(table).write_csv(path)


def read_fractions(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    """x and y columns of a fraction table CSV."""
    frame = _read_table(path)
    _require(frame, ("x", "y"), path)
    return (
        frame.get_column("x").cast(pl.Float64).to_numpy(),
        frame.get_column("y").cast(pl.Int64).to_numpy(),
    )


def read_stage_map(path: PathLike) -> Dict[str, int]:
    """Sample stages from a CSV with columns sample and primary (1/0) or stage (Primary/Metastasis)."""
    frame = pl.read_csv(path, infer_schema_length=0)
    _require(frame, ("sample",), path)
    samples = frame.get_column("sample").to_list()
    if "primary" in frame.columns:
        values = [int(v) for v in frame.get_column("primary").to_list()]
    elif "stage" in frame.columns:
        values = [1 if str(v).strip().lower() == "primary" else 0 for v in frame.get_column("stage").to_list()]
    else:
        raise MissingColumn(f"{path}: needs a 'primary' or 'stage' column", {"column": "primary", "path": str(path)})
    return dict(zip(samples, values))


def write_curves(frame: pl.DataFrame, path: PathLike) -> None:
    """Logistic curve CSV: x, pi_hat, method."""
    frame.select("x", "pi_hat", "method").write_csv(path)


# JSON


def _json_default(value: Any) -> Any:
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (tuple, set, frozenset)):
        return list(value)
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "value"):  # Enum members
        return value.value
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(document: Mapping[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2, default=_json_default) + "\n"


def write_json(document: Mapping[str, Any], path: PathLike) -> None:
    """Write a JSON document with sorted keys."""
    Path(path).write_text(dumps(document), encoding="utf8")


def read_json(path: PathLike) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf8"))
