"""
Step timing for CLI runs.

A :class:`Timer` prints one colored line per finished step; a
:class:`TimingContext` collects the steps of a command and renders them as a
summary table.

Examples:
    >>> with Timer("composition"):
    ...     composition = disk_composition(dataset, cfg)
    ⏱  composition: 1.234s

    >>> steps = TimingContext()
    >>> with steps.measure("transform"):
    ...     rows = clr_transform(composition)
    >>> console.print(steps.summary_table())
"""

import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Iterator, List, Optional

from rich.console import Console
from rich.table import Table

from community_explorer.console_styles import create_data_table, format_time

_console: Optional[Console] = None
_local = threading.local()


def get_console() -> Console:
    """Shared console for timing output (stderr, so data on stdout stays clean)."""
    global _console
    if _console is None:
        _console = Console(stderr=True)
    return _console


def _depth() -> int:
    return getattr(_local, "depth", 0)


def _set_depth(value: int) -> None:
    _local.depth = max(value, 0)


@dataclass
class TimerResult:
    """Result of a timed step.

    Attributes:
        name: Step name
        elapsed: Seconds
        nesting_level: 0 for top-level steps
        error: Exception raised inside the step, if any
    """

    name: str
    elapsed: float
    nesting_level: int = 0
    error: Optional[BaseException] = None

    @property
    def success(self) -> bool:
        return self.error is None

    def __str__(self) -> str:
        status = "✓" if self.success else "✗"
        return f"{'  ' * self.nesting_level}{status} {self.name}: {self.elapsed:.3f}s"


def _color(seconds: float) -> str:
    if seconds < 0.1:
        return "green"
    if seconds < 1.0:
        return "yellow"
    if seconds < 5.0:
        return "orange1"
    return "red"


class Timer:
    """Context manager timing one step.

    Attributes:
        name: Step name
        silent: Suppress the timing line
        elapsed: Seconds, set on exit
        result: TimerResult, set on exit
    """

    def __init__(self, name: str, silent: bool = False, console: Optional[Console] = None):
        self.name = name
        self.silent = silent
        self.console = console or get_console()
        self.elapsed = 0.0
        self.result: Optional[TimerResult] = None
        self._start = 0.0
        self._level = 0

    def __enter__(self) -> "Timer":
        self._level = _depth()
        _set_depth(self._level + 1)
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> bool:
        self.elapsed = time.perf_counter() - self._start
        _set_depth(self._level)
        self.result = TimerResult(self.name, self.elapsed, self._level, exc_val)
        if not self.silent:
            indent = "  " * self._level
            if exc_val is not None:
                self.console.print(
                    f"[red]{indent}⏱  {self.name}: {self.elapsed:.3f}s (failed with {type(exc_val).__name__})[/red]"
                )
            else:
                color = _color(self.elapsed)
                self.console.print(f"[{color}]{indent}⏱  {self.name}: {self.elapsed:.3f}s[/{color}]")
        return False


class TimingContext:
    """Collects the timed steps of one command."""

    def __init__(self, console: Optional[Console] = None, silent: bool = True):
        self.results: List[TimerResult] = []
        self.console = console or get_console()
        self.silent = silent

    @contextmanager
    def measure(self, name: str) -> Iterator[Timer]:
        """Time a step and record it, also when the step raises."""
        step = Timer(name, silent=self.silent, console=self.console)
        try:
            with step:
                yield step
        finally:
            if step.result is not None:
                self.results.append(step.result)

    def total(self) -> float:
        return sum(r.elapsed for r in self.results if r.success)

    def summary_table(self, title: str = "Timing") -> Table:
        table = create_data_table(title, [("Step", "left", "cyan"), ("Time", "right", "yellow")])
        for result in self.results:
            label = ("  " * result.nesting_level) + result.name
            table.add_row(label if result.success else f"[red]{label}[/red]", format_time(result.elapsed))
        table.add_row("[bold]Total[/bold]", f"[bold]{format_time(self.total())}[/bold]")
        return table
