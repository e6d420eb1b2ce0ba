"""
Tests for CSV and JSON serialization.
"""

import json
from pathlib import Path

import numpy as np
import polars as pl
import pytest

from community_explorer import io
from community_explorer.data.models import Dataset
from community_explorer.errors import MissingColumn, ParseError
from community_explorer.evaluation.models import SampleFractionTable
from community_explorer.neighborhood.composition import disk_composition
from community_explorer.neighborhood.models import DiskConfig, Histogram
from community_explorer.pipelines.models import CommunityAssignment
from community_explorer.transform import clr_transform


@pytest.fixture
def composition(small_dataset: Dataset):
    """Disk rows of every cell in the small dataset."""
    return disk_composition(small_dataset, DiskConfig(r=2.0, boundary_margin=0.0))


@pytest.mark.unit
def test_cells_csv_reingests(small_dataset: Dataset, temp_dir: Path) -> None:
    """A written cells file ingests back to the same dataset."""
    from community_explorer.data.ingest import ingest_cells

    path = temp_dir / "cells_out.csv"
    io.write_cells(small_dataset, path)
    assert ingest_cells(path) == small_dataset


@pytest.mark.unit
def test_composition_file_layout(composition, temp_dir: Path) -> None:
    """Metadata columns come first, then one fraction column per cell type."""
    path = temp_dir / "comp.csv"
    io.write_composition(composition, path)
    frame = pl.read_csv(path)
    assert frame.columns == ["cell_id", "sample", "fov", "n_i", "B-plasma", "T", "normal-BEC", "tumor"]
    assert frame.height == composition.n_rows

    loaded = io.read_composition(path)
    np.testing.assert_allclose(loaded.rows, composition.rows)
    assert loaded.row_cells.tolist() == composition.row_cells.tolist()
    assert loaded.row_fovs.tolist() == composition.row_fovs.tolist()
    assert loaded.registry.names == composition.registry.names


@pytest.mark.unit
def test_read_composition_errors(temp_dir: Path) -> None:
    """Missing metadata or missing type columns are reported."""
    no_counts = temp_dir / "no_counts.csv"
    no_counts.write_text("cell_id,sample,fov,a,b\n1,S,,0.5,0.5\n")
    with pytest.raises(MissingColumn) as excinfo:
        io.read_composition(no_counts)
    assert excinfo.value.details["column"] == "n_i"

    no_types = temp_dir / "no_types.csv"
    no_types.write_text("cell_id,sample,fov,n_i\n1,S,,3\n")
    with pytest.raises(ParseError):
        io.read_composition(no_types)


@pytest.mark.unit
def test_log_ratio_file_carries_provenance(composition, temp_dir: Path) -> None:
    """Log-ratio files start with a provenance line and are told apart from compositions."""
    matrix = clr_transform(composition)
    path = temp_dir / "lr.csv"
    io.write_log_ratio(matrix, path)
    assert path.read_text().startswith("# provenance=transformed\n")
    assert io.is_log_ratio_file(path)

    rowset, provenance = io.read_log_ratio(path)
    assert provenance == "transformed"
    np.testing.assert_allclose(rowset.matrix, matrix.rows)
    assert rowset.cell_ids.tolist() == composition.row_cells.tolist()

    plain = temp_dir / "comp.csv"
    io.write_composition(composition, plain)
    assert not io.is_log_ratio_file(plain)


@pytest.mark.unit
def test_assignment_without_samples(temp_dir: Path) -> None:
    """Assignments without sample metadata leave those columns empty."""
    assignment = CommunityAssignment(
        cell_ids=np.array(["3", "1", "2"], dtype=object), labels=np.array([0, 1, 0]), method="x"
    )
    path = temp_dir / "assignment.csv"
    io.write_assignment(assignment, path)
    assert pl.read_csv(path).columns == ["cell_id", "sample", "fov", "community"]

    loaded = io.read_assignment(path)
    assert loaded.labels_by_cell() == {"3": 0, "1": 1, "2": 0}
    assert loaded.row_samples is None
    assert loaded.method == "loaded"


@pytest.mark.unit
def test_read_assignment_requires_community(temp_dir: Path) -> None:
    """An assignment file needs a community column."""
    path = temp_dir / "bad.csv"
    path.write_text("cell_id,label\n1,0\n")
    with pytest.raises(MissingColumn):
        io.read_assignment(path)


@pytest.mark.unit
def test_fractions_file(temp_dir: Path) -> None:
    """Fraction tables are written with sample, x, y, k and n columns."""
    table = SampleFractionTable(
        community=2,
        samples=("A", "B"),
        x=np.array([25.0, 0.0]),
        y=np.array([1, 0]),
        k=np.array([1, 0]),
        totals=np.array([4, 3]),
    )
    path = temp_dir / "fractions.csv"
    io.write_fractions(table, path)
    assert pl.read_csv(path).columns == ["sample", "x", "y", "k", "n"]
    x, y = io.read_fractions(path)
    np.testing.assert_allclose(x, [25.0, 0.0])
    assert y.tolist() == [1, 0]


@pytest.mark.unit
@pytest.mark.parametrize(
    "content",
    [
        "sample,primary\nA,1\nB,0\n",
        "sample,stage\nA,Primary\nB,Metastasis\n",
    ],
)
def test_read_stage_map(content: str, temp_dir: Path) -> None:
    """Stages are read from a 0/1 primary column or a Primary/Metastasis stage column."""
    path = temp_dir / "stages.csv"
    path.write_text(content)
    assert io.read_stage_map(path) == {"A": 1, "B": 0}


@pytest.mark.unit
def test_read_stage_map_needs_stage_column(temp_dir: Path) -> None:
    """A file with neither column is rejected."""
    path = temp_dir / "stages.csv"
    path.write_text("sample,tissue\nA,Breast\n")
    with pytest.raises(MissingColumn):
        io.read_stage_map(path)


@pytest.mark.unit
def test_histogram_file(temp_dir: Path) -> None:
    """Histograms list their bin bounds and counts."""
    path = temp_dir / "hist.csv"
    io.write_histogram(Histogram.of(np.array([1.0, 2.0, 3.0, 3.0]), 2), path)
    frame = pl.read_csv(path)
    assert frame.columns == ["bin_lower", "bin_upper", "count"]
    assert frame.get_column("count").sum() == 4


@pytest.mark.unit
def test_json_is_sorted_and_numpy_aware(temp_dir: Path) -> None:
    """JSON documents have sorted keys, a trailing newline and accept numpy values."""
    text = io.dumps({"b": np.int64(2), "a": np.array([1.5, 2.5]), "c": (1, 2)})
    assert text.endswith("}\n")
    assert list(json.loads(text)) == ["a", "b", "c"]
    assert json.loads(text)["a"] == [1.5, 2.5]

    path = temp_dir / "doc.json"
    io.write_json({"z": 1, "k": None}, path)
    assert io.read_json(path) == {"k": None, "z": 1}
    assert path.read_text() == io.dumps({"k": None, "z": 1})
