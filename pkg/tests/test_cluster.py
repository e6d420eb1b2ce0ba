"""
Tests for k-means, weighted Ward agglomeration and k selection.
"""

import itertools

import numpy as np
import pytest

from community_explorer.cluster import (
    KMeansOptions,
    Partition,
    elbow_select_k,
    gap_select_k,
    kmeans,
    knee_index,
    ward_agglomerate,
    ward_cost,
    within_ss,
)
from community_explorer.errors import KTooLarge, ResourceExceeded
from community_explorer.seeding import derive_rng, derive_seed


def _best_two_partition_wcss(rows: np.ndarray) -> float:
    """Exhaustive minimum wcss over all 2-partitions."""
    n = rows.shape[0]
    best = np.inf
    for mask in itertools.product((0, 1), repeat=n - 1):
        labels = np.array((0,) + mask)
        if labels.min() == labels.max():
            continue
        total = 0.0
        for j in (0, 1):
            part = rows[labels == j]
            total += float(((part - part.mean(axis=0)) ** 2).sum())
        best = min(best, total)
    return best


def _naive_ward_heights(points: np.ndarray) -> list:
    """Ward merge heights by recomputing ΔESS over all live clusters each step."""
    clusters = [[i] for i in range(len(points))]
    heights = []
    while len(clusters) > 1:
        best = None
        for a, b in itertools.combinations(range(len(clusters)), 2):
            ca, cb = points[clusters[a]], points[clusters[b]]
            cost = ward_cost(ca.mean(axis=0), len(ca), cb.mean(axis=0), len(cb))
            if best is None or cost < best[0]:
                best = (cost, a, b)
        cost, a, b = best
        heights.append(cost)
        clusters[a] = clusters[a] + clusters[b]
        del clusters[b]
    return heights


@pytest.mark.unit
def test_derived_seeds_are_stable_and_distinct() -> None:
    """The same path gives the same seed; different paths differ."""
    assert derive_seed(7, "kmeans", "restart", 0) == derive_seed(7, "kmeans", "restart", 0)
    assert derive_seed(7, "kmeans", "restart", 0) != derive_seed(7, "kmeans", "restart", 1)
    assert derive_seed(7, "a") != derive_seed(8, "a")
    first = derive_rng(3, "x").standard_normal(5)
    np.testing.assert_array_equal(first, derive_rng(3, "x").standard_normal(5))


@pytest.mark.unit
def test_kmeans_k1_wcss_is_total_sum_of_squares(blob_rows: np.ndarray) -> None:
    """With k=1 the wcss is the total sum of squares about the mean."""
    result = kmeans(blob_rows, 1, seed=0)
    total = ((blob_rows - blob_rows.mean(axis=0)) ** 2).sum()
    assert result.wcss == pytest.approx(total)
    assert result.k == 1


@pytest.mark.unit
def test_kmeans_recovers_blobs(blob_rows: np.ndarray) -> None:
    """Three separated blobs come out as three clusters of 40."""
    result = kmeans(blob_rows, 3, seed=1)
    assert sorted(result.partition.sizes().tolist()) == [40, 40, 40]
    for start in (0, 40, 80):
        assert np.unique(result.labels[start : start + 40]).size == 1


@pytest.mark.unit
def test_kmeans_is_deterministic(blob_rows: np.ndarray) -> None:
    """The same seed gives the same labels and wcss."""
    a = kmeans(blob_rows, 4, seed=5)
    b = kmeans(blob_rows, 4, seed=5)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert a.wcss == b.wcss


@pytest.mark.unit
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_two_means_finds_optimal_split_of_small_inputs(seed: int) -> None:
    """On n <= 10 rows, best-of-restarts 2-means reaches the exhaustive optimum."""
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((9, 2))
    result = kmeans(rows, 2, seed=seed, restarts=50)
    assert result.wcss == pytest.approx(_best_two_partition_wcss(rows), rel=1e-9)


@pytest.mark.unit
def test_kmeans_wcss_history_never_increases(blob_rows: np.ndarray) -> None:
    """Lloyd iterations never increase the within-cluster sum of squares."""
    result = kmeans(blob_rows, 5, seed=2, restarts=1)
    history = np.array(result.history)
    assert np.all(np.diff(history) <= 1e-9)
    assert within_ss(blob_rows, result.labels, result.centroids) == pytest.approx(result.wcss)


@pytest.mark.unit
def test_kmeans_clusters_are_never_empty() -> None:
    """Duplicate rows still give k non-empty clusters."""
    rows = np.zeros((6, 2))
    result = kmeans(rows, 3, seed=0)
    assert result.partition.sizes().min() >= 1


@pytest.mark.unit
def test_kmeans_errors() -> None:
    """k larger than n, k < 1 and empty input are rejected."""
    rows = np.ones((3, 2))
    with pytest.raises(KTooLarge):
        kmeans(rows, 4)
    with pytest.raises(ValueError):
        kmeans(rows, 0)
    with pytest.raises(ValueError):
        kmeans(np.empty((0, 2)), 1)


@pytest.mark.unit
def test_kmeans_options_override_arguments(blob_rows: np.ndarray) -> None:
    """KMeansOptions replaces the restart count."""
    result = kmeans(blob_rows, 2, options=KMeansOptions(restarts=2))
    assert result.restarts_used == 2


@pytest.mark.unit
def test_partition_from_labels_is_dense() -> None:
    """Arbitrary labels are renumbered by first appearance."""
    partition = Partition.from_labels(np.array([7, 7, 3, 9, 3]))
    assert partition.labels.tolist() == [0, 0, 1, 2, 1]
    assert partition.k == 3
    with pytest.raises(ValueError):
        Partition(labels=np.array([0, 2]), k=3)


@pytest.mark.unit
def test_ward_two_unit_leaves_height() -> None:
    """Two unit-weight leaves at distance d merge at d² / 2."""
    dendrogram = ward_agglomerate([(np.array([0.0, 0.0]), 1.0), (np.array([3.0, 4.0]), 1.0)])
    assert len(dendrogram.merges) == 1
    assert dendrogram.merges[0].height == pytest.approx(12.5)
    assert dendrogram.weight(dendrogram.root) == 2.0


@pytest.mark.unit
def test_ward_matches_naive_oracle() -> None:
    """Merge heights equal a naive Ward recomputation."""
    rng = np.random.default_rng(8)
    points = rng.standard_normal((12, 3))
    dendrogram = ward_agglomerate([(p, 1.0) for p in points])
    heights = [m.height for m in dendrogram.merges]
    np.testing.assert_allclose(heights, _naive_ward_heights(points))
    assert np.all(np.diff(heights) >= -1e-12)


@pytest.mark.unit
def test_ward_weighted_leaves_equal_expanded_points() -> None:
    """A leaf of weight w merges like w identical points."""
    weighted = ward_agglomerate([(np.array([0.0]), 3.0), (np.array([2.0]), 1.0), (np.array([10.0]), 2.0)])
    assert weighted.merges[0].height == pytest.approx(3 * 1 / 4 * 4.0)
    assert (weighted.merges[0].a, weighted.merges[0].b) == (0, 1)
    assert sorted(weighted.members_of(weighted.root).tolist()) == [0, 1, 2]


@pytest.mark.unit
def test_ward_ties_go_to_smallest_pair() -> None:
    """Equal costs merge the lowest-numbered pair first."""
    leaves = [(np.array([float(x)]), 1.0) for x in (0.0, 1.0, 2.0, 3.0)]
    dendrogram = ward_agglomerate(leaves)
    assert (dendrogram.merges[0].a, dendrogram.merges[0].b) == (0, 1)
    assert (dendrogram.merges[1].a, dendrogram.merges[1].b) == (2, 3)
    assert dendrogram.children(dendrogram.root) == (4, 5)
    assert dendrogram.leaves_under(dendrogram.root) == [0, 1, 2, 3]
    assert dendrogram.to_linkage().shape == (3, 4)


@pytest.mark.unit
def test_ward_single_leaf_and_validation() -> None:
    """One leaf is its own root; empty input and weights below 1 are rejected."""
    single = ward_agglomerate([(np.array([1.0]), 5.0)])
    assert single.root == 0
    assert single.is_leaf(single.root)
    with pytest.raises(ValueError):
        ward_agglomerate([])
    with pytest.raises(ValueError):
        ward_agglomerate([(np.array([0.0]), 0.5)])


@pytest.mark.unit
def test_knee_index_picks_elbow() -> None:
    """The chord-distance knee of an L-shaped curve is its corner."""
    assert knee_index([1, 2, 3, 4, 5, 6], [100.0, 20.0, 15.0, 12.0, 10.0, 9.0]) == 1
    assert knee_index([1, 2], [5.0, 1.0]) == 0


@pytest.mark.unit
def test_elbow_selects_three_blobs(blob_rows: np.ndarray) -> None:
    """Elbow picks k=3 for three separated blobs."""
    selection, results = elbow_select_k(blob_rows, range(1, 9), seed=0, restarts=5)
    assert selection.k == 3
    assert selection.ks == tuple(range(1, 9))
    assert len(results) == 8
    assert list(selection.curve()) == list(range(1, 9))


@pytest.mark.unit
def test_gap_reports_na_when_rule_never_holds(blob_rows: np.ndarray) -> None:
    """Gap keeps rising from k=1 to k=2 on separated blobs, so a 1..2 range gives NA."""
    selection = gap_select_k(blob_rows, range(1, 3), B=10, seed=0)
    assert selection.k is None
    assert selection.statistic[1] > selection.statistic[0]
    assert len(selection.spread) == 2


@pytest.mark.unit
def test_gap_is_deterministic(blob_rows: np.ndarray) -> None:
    """The same seed reproduces the Gap curve and selection."""
    first = gap_select_k(blob_rows, range(1, 6), B=5, seed=4)
    second = gap_select_k(blob_rows, range(1, 6), B=5, seed=4)
    assert first == second
    assert first.k is None or first.k in first.ks


@pytest.mark.unit
def test_gap_budget_raises() -> None:
    """rows × B over the budget is refused before any work."""
    with pytest.raises(ResourceExceeded) as excinfo:
        gap_select_k(np.zeros((1000, 2)), B=20, budget=10_000)
    assert excinfo.value.details["budget"] == 10_000


@pytest.mark.performance
def test_ward_matches_naive_oracle_on_200_points() -> None:
    """Merge heights match an all-pairs rescan at every step for 200 points."""
    points = np.random.default_rng(21).standard_normal((200, 4))
    dendrogram = ward_agglomerate([(p, 1.0) for p in points])

    centroids = [p.copy() for p in points]
    sizes = [1.0] * len(points)
    expected = []
    while len(centroids) > 1:
        cost, a, b = min(
            (ward_cost(centroids[a], sizes[a], centroids[b], sizes[b]), a, b)
            for a, b in itertools.combinations(range(len(centroids)), 2)
        )
        expected.append(cost)
        merged = sizes[a] + sizes[b]
        centroids[a] = (sizes[a] * centroids[a] + sizes[b] * centroids[b]) / merged
        sizes[a] = merged
        del centroids[b], sizes[b]

    np.testing.assert_allclose([m.height for m in dendrogram.merges], expected, rtol=1e-9)
