"""
Pytest configuration and shared fixtures for community-explorer tests.
"""

import tempfile
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

from community_explorer.data.ingest import ingest_cells
from community_explorer.data.models import CellRecord, CellTypeRegistry, Dataset

CELLS_CSV = """cell_id,sample,fov,x,y,cell_type
1,S1,1,0.0,0.0,tumor
2,S1,1,1.0,0.0,tumor
3,S1,1,0.0,1.0,T
4,S1,1,1.0,1.0,B-plasma
5,S1,2,10.0,10.0,normal-BEC
6,S1,2,11.0,10.0,tumor
7,S2,1,0.0,0.0,T
8,S2,1,0.5,0.0,T
9,S2,1,0.0,0.5,normal-BEC
10,S2,1,3.0,3.0,tumor
"""


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Provide a temporary directory that is cleaned up after test.

    Yields:
        Path to temporary directory
    """
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def cells_csv(temp_dir: Path) -> Path:
    """Write a small two-sample cells CSV with FOVs.

    Args:
        temp_dir: Temporary directory fixture

    Returns:
        Path to the CSV file
    """
    path = temp_dir / "cells.csv"
    path.write_text(CELLS_CSV)
    return path


@pytest.fixture
def small_dataset(cells_csv: Path) -> Dataset:
    """Ingested form of ``cells_csv``."""
    return ingest_cells(cells_csv)


@pytest.fixture
def grid_dataset() -> Dataset:
    """A 20 x 20 unit grid in one sample, two cell types in a checkerboard.

    Returns:
        Dataset with 400 cells named "1".."400"
    """
    registry = CellTypeRegistry(("a", "b"))
    cells = []
    for i in range(20):
        for j in range(20):
            cells.append(
                CellRecord(
                    cell_id=str(len(cells) + 1),
                    sample_id="grid",
                    x=float(i),
                    y=float(j),
                    cell_type=(i + j) % 2,
                )
            )
    return Dataset.from_records(cells, registry)


@pytest.fixture
def random_dataset() -> Dataset:
    """300 uniformly scattered cells of three types over two samples and two FOVs.

    Returns:
        Dataset with reproducible coordinates
    """
    rng = np.random.default_rng(11)
    n = 300
    registry = CellTypeRegistry(("a", "b", "c"))
    cells = [
        CellRecord(
            cell_id=str(i + 1),
            sample_id="S1" if i < 200 else "S2",
            x=float(rng.uniform(0, 100)),
            y=float(rng.uniform(0, 100)),
            cell_type=int(rng.integers(3)),
            fov_id="f1" if i % 2 == 0 else "f2",
        )
        for i in range(n)
    ]
    return Dataset.from_records(cells, registry)


@pytest.fixture
def blob_rows() -> np.ndarray:
    """Three well separated Gaussian blobs of 40 rows each in 2-D.

    Returns:
        (120, 2) matrix ordered blob by blob
    """
    rng = np.random.default_rng(3)
    centers = np.array([[0.0, 0.0], [20.0, 0.0], [0.0, 20.0]])
    return np.vstack([c + rng.standard_normal((40, 2)) for c in centers])


@pytest.fixture
def two_blob_rows() -> np.ndarray:
    """Two well separated Gaussian blobs of 50 rows each in 3-D."""
    rng = np.random.default_rng(5)
    return np.vstack(
        [
            rng.standard_normal((50, 3)),
            np.array([15.0, 15.0, 15.0]) + rng.standard_normal((50, 3)),
        ]
    )
