"""
Tests for the task runner, step timing and console helpers.
"""

import pytest
from rich.console import Console

from community_explorer.console_styles import create_community_table, format_count
from community_explorer.utils import Timer, TimingContext, run_tasks


def _square(value: int) -> int:
    return value * value


@pytest.mark.unit
@pytest.mark.parametrize("workers", [1, 2, None])
def test_run_tasks_keeps_task_order(workers) -> None:
    """Results line up with their tasks for any worker count."""
    assert run_tasks(_square, list(range(8)), workers) == [i * i for i in range(8)]


@pytest.mark.unit
def test_run_tasks_handles_empty_input() -> None:
    """No tasks give no results."""
    assert run_tasks(_square, [], 4) == []


@pytest.mark.unit
def test_timing_context_records_steps() -> None:
    """Steps are recorded in order, nested steps one level deeper."""
    steps = TimingContext(console=Console(quiet=True))
    with steps.measure("outer"):
        with steps.measure("inner"):
            pass
    names = [(r.name, r.nesting_level) for r in steps.results]
    assert names == [("inner", 1), ("outer", 0)]
    assert steps.total() >= 0.0
    assert steps.summary_table().row_count == 3


@pytest.mark.unit
def test_failed_step_is_recorded() -> None:
    """A step that raises is kept, marked failed, and the error propagates."""
    steps = TimingContext(console=Console(quiet=True))
    with pytest.raises(RuntimeError):
        with steps.measure("boom"):
            raise RuntimeError("boom")
    assert not steps.results[0].success


@pytest.mark.unit
def test_timer_prints_elapsed_line() -> None:
    """A visible timer prints its step name."""
    console = Console(record=True, width=80)
    with Timer("ingest", console=console) as step:
        pass
    assert step.elapsed >= 0.0
    assert "ingest" in console.export_text()


@pytest.mark.unit
def test_community_table_truncates() -> None:
    """Large community lists are cut with a summary row."""
    table = create_community_table("sizes", [1] * 50, {0: "highest tumor"}, limit=10)
    assert table.row_count == 11
    assert format_count(1234567) == "1,234,567"
