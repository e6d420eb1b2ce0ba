"""
Tests for DCD-TMHC, STM and the k-means baselines.
"""

import math

import numpy as np
import pytest

from community_explorer.data.models import CellTypeRegistry, Dataset
from community_explorer.neighborhood.models import DiskConfig, ScopeMode
from community_explorer.pipelines import (
    CommunityAssignment,
    StmConfig,
    TmhcConfig,
    as_rowset,
    dcd_tmhc,
    elbow_communities,
    gap_communities,
    kmeans_communities,
    simulation_config,
    stm,
    tmhc_cluster,
)
from community_explorer.pipelines.models import TmhcTrace
from community_explorer.pipelines.tmhc import _step3


def _patches_dataset(seed: int = 0) -> Dataset:
    """Two side-by-side patches, left mostly type a, right mostly type b."""
    rng = np.random.default_rng(seed)
    n = 600
    x = rng.uniform(0, 200, n)
    y = rng.uniform(0, 100, n)
    left = x < 100
    major = np.where(left, 0, 1)
    flip = rng.uniform(size=n) < 0.1
    types = np.where(flip, 1 - major, major)
    return Dataset(
        cell_ids=np.array([str(i + 1) for i in range(n)], dtype=object),
        sample_ids=np.full(n, "S", dtype=object),
        fov_ids=None,
        x=x,
        y=y,
        cell_types=types.astype(np.int64),
        registry=CellTypeRegistry(("a", "b")),
        samples=("S",),
    )


@pytest.mark.unit
def test_stm_stops_below_k1() -> None:
    """Fewer rows than K1 make a single community."""
    rows = np.random.default_rng(0).standard_normal((5, 2))
    assignment = stm(rows, StmConfig(K1=10))
    assert assignment.n_communities == 1
    assert assignment.method == "stm"


@pytest.mark.unit
def test_stm_infinite_k1_is_one_community(two_blob_rows: np.ndarray) -> None:
    """K1 = inf never splits."""
    assignment = stm(two_blob_rows, StmConfig(K1=math.inf))
    assert assignment.n_communities == 1
    assert assignment.config["K1"] is None


@pytest.mark.unit
def test_stm_splits_two_blobs(two_blob_rows: np.ndarray) -> None:
    """With K1 above the blob size, two blobs give exactly two communities."""
    assignment = stm(two_blob_rows, StmConfig(K1=60, K2=1, seed=3))
    assert assignment.n_communities == 2
    assert sorted(assignment.sizes()) == [50, 50]
    assert np.unique(assignment.labels[:50]).size == 1


@pytest.mark.unit
def test_stm_k2_blocks_unbalanced_splits() -> None:
    """A split leaving a child below K2 keeps the node whole."""
    rows = np.vstack([np.zeros((30, 2)), np.array([[100.0, 100.0]])])
    rows[:30] += np.random.default_rng(1).standard_normal((30, 2)) * 0.01
    assignment = stm(rows, StmConfig(K1=2, K2=2, seed=0))
    # 2-means isolates the outlier, which K2 forbids
    assert assignment.n_communities == 1


@pytest.mark.unit
def test_stm_is_deterministic(blob_rows: np.ndarray) -> None:
    """The same seed gives identical labels."""
    cfg = StmConfig(K1=30, K2=5, seed=11)
    np.testing.assert_array_equal(stm(blob_rows, cfg).labels, stm(blob_rows, cfg).labels)


@pytest.mark.unit
def test_stm_config_validation() -> None:
    """K1 below 2 or K2 below 1 are rejected."""
    with pytest.raises(ValueError):
        StmConfig(K1=1)
    with pytest.raises(ValueError):
        StmConfig(K2=0)


@pytest.mark.unit
def test_tmhc_identical_rows_form_one_community() -> None:
    """Rows with no spread cannot be split."""
    rows = np.ones((300, 3))
    assignment, trace = tmhc_cluster(rows, TmhcConfig(size_cap=50, n_sim=10))
    assert assignment.n_communities == 1
    assert len(trace.step2_finalized) == 1
    assert trace.step2_leaves == []


@pytest.mark.unit
def test_tmhc_small_input_is_one_ward_leaf() -> None:
    """Input within the size cap becomes a single Ward leaf and community."""
    rows = np.random.default_rng(0).standard_normal((40, 2))
    assignment, trace = tmhc_cluster(rows, TmhcConfig(n_sim=10))
    assert trace.size_cap == 200
    assert assignment.n_communities == 1
    assert trace.dendrogram is not None and trace.dendrogram.n_leaves == 1
    assert trace.tests_run == 0


@pytest.mark.unit
def test_tmhc_separates_blobs(blob_rows: np.ndarray) -> None:
    """Three separated blobs are found by the SigClust-gated splits."""
    assignment, trace = tmhc_cluster(blob_rows, TmhcConfig(size_cap=20, n_sim=20, seed=1))
    assert assignment.n_communities >= 3
    for start in (0, 40, 80):
        block = set(assignment.labels[start : start + 40].tolist())
        others = set(np.delete(assignment.labels, np.arange(start, start + 40)).tolist())
        assert block.isdisjoint(others)
    assert trace.tests_run >= 2
    assert assignment.config["resolved_size_cap"] == 20


@pytest.mark.unit
def test_tmhc_communities_cover_every_row(two_blob_rows: np.ndarray) -> None:
    """Every row lands in exactly one community and labels are dense."""
    assignment, _ = tmhc_cluster(two_blob_rows, TmhcConfig(size_cap=10, n_sim=10, K1=20))
    assert len(assignment) == two_blob_rows.shape[0]
    assert set(assignment.labels.tolist()) == set(range(assignment.n_communities))


@pytest.mark.unit
def test_tmhc_is_deterministic(two_blob_rows: np.ndarray) -> None:
    """The same seed reproduces the partition."""
    cfg = TmhcConfig(size_cap=15, n_sim=10, seed=4)
    first, _ = tmhc_cluster(two_blob_rows, cfg)
    second, _ = tmhc_cluster(two_blob_rows, cfg)
    np.testing.assert_array_equal(first.labels, second.labels)


@pytest.mark.unit
@pytest.mark.parametrize("n_rows,expected", [(100, 200), (50_000, 1000), (10_000_000, 60_000)])
def test_size_cap_default(n_rows: int, expected: int) -> None:
    """The default size cap is clamp(n // 50, 200, 60000)."""
    assert TmhcConfig().resolved_size_cap(n_rows) == expected
    assert TmhcConfig(size_cap=77).resolved_size_cap(n_rows) == 77


@pytest.mark.unit
def test_tmhc_config_validation() -> None:
    """Negative K1, bad alpha and unknown transforms are rejected."""
    with pytest.raises(ValueError):
        TmhcConfig(K1=-1)
    with pytest.raises(ValueError):
        TmhcConfig(alpha=1.5)
    with pytest.raises(ValueError):
        TmhcConfig(transform_policy="log")


@pytest.mark.integration
def test_dcd_tmhc_finds_two_patches() -> None:
    """Full pipeline: disk rows over two patches split left from right."""
    dataset = _patches_dataset()
    cfg = TmhcConfig(size_cap=100, n_sim=20, seed=0)
    assignment = dcd_tmhc(dataset, cfg, disk=DiskConfig(r=15.0, boundary_margin=0.0))
    assert assignment.method == "dcd-tmhc"
    assert assignment.n_communities >= 2
    assert assignment.config["disk"]["r"] == 15.0

    idx = dataset.indices_of(assignment.cell_ids.tolist())
    labels = assignment.labels
    far_left = labels[dataset.x[idx] < 60]
    far_right = labels[dataset.x[idx] > 140]
    # the dominant community of each side differs
    assert np.bincount(far_left).argmax() != np.bincount(far_right).argmax()


@pytest.mark.integration
def test_dcd_tmhc_automatic_radius() -> None:
    """Without a disk configuration the radius is picked automatically."""
    dataset = _patches_dataset(1)
    assignment = dcd_tmhc(dataset, TmhcConfig(n_sim=10, seed=2, target_occupancy=20))
    assert assignment.config["disk"]["boundary_margin"] == 0.0
    assert assignment.config["disk"]["r"] > 0
    assert len(assignment) == dataset.n


@pytest.mark.unit
def test_kmeans_communities(blob_rows: np.ndarray) -> None:
    """Fixed-k k-means labels every row."""
    assignment = kmeans_communities(blob_rows, 3, seed=0)
    assert assignment.n_communities == 3
    assert assignment.method == "kmeans"
    assert assignment.cell_ids[0] == "0"


@pytest.mark.unit
def test_elbow_communities(blob_rows: np.ndarray) -> None:
    """Elbow baseline uses the k-means result at the selected k."""
    assignment, selection = elbow_communities(blob_rows, range(1, 7), seed=0, restarts=3)
    assert selection.k == 3
    assert assignment.n_communities == 3
    assert assignment.config["k_range"] == [1, 6]


@pytest.mark.unit
def test_gap_communities_na_gives_no_assignment(blob_rows: np.ndarray) -> None:
    """When Gap reports NA no assignment is produced."""
    assignment, selection = gap_communities(blob_rows, range(1, 3), B=5, seed=0)
    assert selection.k is None
    assert assignment is None


@pytest.mark.unit
def test_assignment_manifest_and_validation() -> None:
    """Assignments report their sizes and reject sparse labels."""
    assignment = CommunityAssignment(
        cell_ids=np.array(["a", "b", "c"], dtype=object),
        labels=np.array([1, 0, 1]),
        method="test",
        seed=3,
    )
    manifest = assignment.manifest()
    assert manifest["community_sizes"] == [1, 2]
    assert manifest["n_communities"] == 2
    assert assignment.labels_by_cell() == {"a": 1, "b": 0, "c": 1}
    with pytest.raises(ValueError):
        CommunityAssignment(cell_ids=np.array(["a", "b"], dtype=object), labels=np.array([0, 2]), method="x")


@pytest.mark.unit
def test_as_rowset_wraps_matrices() -> None:
    """Bare matrices get row-position cell ids; rowsets pass through."""
    rowset = as_rowset(np.zeros((3, 2)))
    assert rowset.cell_ids.tolist() == ["0", "1", "2"]
    assert as_rowset(rowset) is rowset
    with pytest.raises(ValueError):
        as_rowset(np.zeros(3))


@pytest.mark.unit
def test_stm_larger_k1_never_adds_communities(blob_rows: np.ndarray) -> None:
    """Raising K1 only stops the same split tree earlier."""
    counts = [stm(blob_rows, StmConfig(K1=k1, K2=1, seed=2)).n_communities for k1 in (2, 10, 30, 60, 200)]
    assert counts == sorted(counts, reverse=True)
    assert counts[-1] == 1


@pytest.mark.unit
def test_tmhc_alpha_zero_is_one_community(blob_rows: np.ndarray) -> None:
    """At alpha 0 no split is ever significant."""
    assignment, trace = tmhc_cluster(blob_rows, TmhcConfig(size_cap=20, n_sim=10, alpha=0.0))
    assert assignment.n_communities == 1
    assert len(trace.step2_finalized) == 1


@pytest.mark.integration
def test_dcd_tmhc_alpha_zero_is_one_community() -> None:
    dataset = _patches_dataset()
    cfg = TmhcConfig(size_cap=100, n_sim=10, alpha=0.0)
    assignment = dcd_tmhc(dataset, cfg, disk=DiskConfig(r=15.0, boundary_margin=0.0))
    assert assignment.n_communities == 1


@pytest.mark.unit
def test_ward_stage_absorbs_small_piece_into_finalized_node() -> None:
    """A capped Step-2 piece beside a finalized node joins it instead of standing alone."""
    rng = np.random.default_rng(8)
    matrix = np.vstack(
        [
            rng.standard_normal((400, 2)),
            np.array([30.0, 0.0]) + rng.standard_normal((400, 2)),
            np.array([2.0, 0.0]) + 0.5 * rng.standard_normal((6, 2)),
        ]
    )
    a, b, piece = np.arange(400), np.arange(400, 800), np.arange(800, 806)
    trace = TmhcTrace(size_cap=10, step2_finalized=[a, b], step2_leaves=[piece])

    _step3(matrix, TmhcConfig(n_sim=20, seed=0), trace)

    groups = sorted((np.sort(g) for g in trace.step3_emitted), key=lambda g: g[0])
    assert len(groups) == 2
    np.testing.assert_array_equal(groups[0], np.concatenate([a, piece]))
    np.testing.assert_array_equal(groups[1], b)


@pytest.mark.unit
def test_simulation_config_skips_transform() -> None:
    """Simulated tissue is clustered on raw fractions with no boundary margin."""
    dataset = _patches_dataset()
    cfg = simulation_config(dataset, seed=3, n_sim=15, target_occupancy=20)
    assert cfg.transform_policy == "skip"
    assert cfg.seed == 3
    assert cfg.n_sim == 15
    assert cfg.target_occupancy == 20
    assert cfg.disk is not None
    assert cfg.disk.boundary_margin == 0.0
    assert cfg.disk.scope_mode == ScopeMode.GLOBAL
    assert simulation_config(dataset, transform_policy="clr").transform_policy == "clr"
