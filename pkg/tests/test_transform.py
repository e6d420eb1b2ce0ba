"""
Tests for zero replacement and the centered log-ratio transform.
"""

import numpy as np
import pytest

from community_explorer.data.models import CellTypeRegistry
from community_explorer.errors import AllZeroRow
from community_explorer.neighborhood.models import CompositionMatrix
from community_explorer.transform import ZeroPolicy, clr, clr_transform, replace_zeros


def _composition(rows: np.ndarray, counts: np.ndarray) -> CompositionMatrix:
    n, m = rows.shape
    return CompositionMatrix(
        rows=rows,
        row_cells=np.array([str(i + 1) for i in range(n)], dtype=object),
        counts=counts,
        registry=CellTypeRegistry(tuple(f"t{j}" for j in range(m))),
        row_samples=np.full(n, "S", dtype=object),
    )


@pytest.mark.unit
def test_clr_of_uniform_row_is_zero() -> None:
    """A uniform composition maps to the origin."""
    composition = _composition(np.array([[1 / 3, 1 / 3, 1 / 3]]), np.array([3]))
    result = clr_transform(composition)
    np.testing.assert_allclose(result.rows, 0.0, atol=1e-12)
    assert result.provenance == "transformed"


@pytest.mark.unit
def test_replace_zeros_uses_pseudo_count() -> None:
    """A zero gets δ = 0.5 / n_i and the rest shrinks to keep the row sum."""
    replaced = replace_zeros(np.array([[0.0, 0.5, 0.5]]), np.array([10]), 0.5)
    np.testing.assert_allclose(replaced, [[0.05, 0.475, 0.475]])


@pytest.mark.unit
def test_clr_rows_sum_to_zero() -> None:
    """CLR rows lie on the zero-sum hyperplane."""
    rng = np.random.default_rng(0)
    counts = rng.integers(1, 20, size=(30, 4))
    composition = _composition(counts / counts.sum(axis=1, keepdims=True), counts.sum(axis=1))
    result = clr_transform(composition)
    np.testing.assert_allclose(result.rows.sum(axis=1), 0.0, atol=1e-10)
    assert np.isfinite(result.rows).all()


@pytest.mark.unit
def test_clr_matches_definition() -> None:
    """clr(p)_j = log p_j - mean_k log p_k."""
    p = np.array([[0.1, 0.2, 0.7]])
    expected = np.log(p) - np.log(p).mean()
    np.testing.assert_allclose(clr(p), expected)


@pytest.mark.unit
def test_clr_transform_handles_zeros() -> None:
    """Rows with zero entries stay finite after transformation."""
    composition = _composition(np.array([[0.0, 0.0, 1.0], [0.5, 0.5, 0.0]]), np.array([4, 2]))
    result = clr_transform(composition)
    assert np.isfinite(result.rows).all()
    # Zero entries share one value within a row
    assert result.rows[0, 0] == pytest.approx(result.rows[0, 1])


@pytest.mark.unit
def test_skip_policy_passes_rows_through() -> None:
    """The skip policy returns the composition unchanged, flagged identity."""
    rows = np.array([[0.0, 1.0], [0.5, 0.5]])
    result = clr_transform(_composition(rows, np.array([1, 2])), "skip")
    np.testing.assert_array_equal(result.rows, rows)
    assert result.provenance == "identity"


@pytest.mark.unit
def test_all_zero_row_raises() -> None:
    """A row with zero total count is rejected."""
    composition = _composition(np.array([[0.5, 0.5], [0.0, 0.0]]), np.array([2, 0]))
    with pytest.raises(AllZeroRow) as excinfo:
        clr_transform(composition)
    assert excinfo.value.details["row"] == 1


@pytest.mark.unit
def test_single_type_raises() -> None:
    """The log-ratio needs at least two cell types."""
    with pytest.raises(ValueError):
        clr_transform(_composition(np.array([[1.0]]), np.array([1])))


@pytest.mark.unit
@pytest.mark.parametrize("name,kind", [("clr", "pseudo_count"), ("pseudo-count", "pseudo_count"), ("skip", "skip")])
def test_zero_policy_parse(name: str, kind: str) -> None:
    """Pipeline and CLI spellings map to the two policies."""
    assert ZeroPolicy.parse(name).kind == kind


@pytest.mark.unit
def test_zero_policy_rejects_unknown() -> None:
    """Unknown policy names are rejected."""
    with pytest.raises(ValueError):
        ZeroPolicy.parse("drop")


@pytest.mark.unit
@pytest.mark.parametrize("factor", [1e-3, 0.5, 7.0, 1e4])
def test_clr_ignores_row_scale(factor: float) -> None:
    """Rescaling one row leaves its log-ratios and every other row unchanged."""
    rows = np.random.default_rng(6).uniform(0.01, 1.0, size=(5, 4))
    scaled = rows.copy()
    scaled[2] *= factor
    np.testing.assert_allclose(clr(scaled), clr(rows), atol=1e-12)
