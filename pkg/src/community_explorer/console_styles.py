"""Console styling helpers for consistent Rich output.

Example:
    >>> from community_explorer.console_styles import create_summary_table, format_count
    >>> table = create_summary_table("Composition")
    >>> table.add_row("Rows retained", format_count(524_366))
    >>> console.print(table)
"""

from typing import Mapping, Optional, Sequence, Tuple

from rich.box import ROUNDED
from rich.panel import Panel
from rich.table import Table


def format_count(count: int) -> str:
    """Format a count with thousands separator.

    Args:
        count: Number to format

    Returns:
        str: Formatted count string
    """
    return f"{count:,}"


def format_time(seconds: float) -> str:
    return f"{seconds:.3f}s"


def format_percent(value: float, digits: int = 2) -> str:
    return f"{value:.{digits}f}%"


def create_summary_table(title: str, header_style: str = "bold cyan") -> Table:
    """Create a two-column (Metric, Value) summary table.

    Args:
        title: Table title
        header_style: Rich style for the header row

    Returns:
        Table: Configured Rich Table
    """
    table = Table(title=title, show_header=True, header_style=header_style, box=ROUNDED)
    table.add_column("Metric", style="cyan")
    table.add_column("Value", justify="right", style="green")
    return table


def create_data_table(title: str, columns: Sequence[Tuple[str, str, str]]) -> Table:
    """Create a table from (column_name, justify, style) triples."""
    table = Table(title=title, show_header=True, header_style="bold cyan", box=ROUNDED)
    for name, justify, style in columns:
        table.add_column(name, justify=justify, style=style)
    return table


def create_community_table(
    title: str,
    sizes: Sequence[int],
    highlight: Optional[Mapping[int, str]] = None,
    limit: int = 40,
) -> Table:
    """Community sizes with their share of all labeled cells.

    Args:
        title: Table title
        sizes: Cells per community, indexed by community
        highlight: Community index to a note shown in the last column
        limit: Show at most this many communities

    Returns:
        Table: Configured Rich Table
    """
    highlight = highlight or {}
    table = create_data_table(
        title,
        [("Community", "right", "cyan"), ("Cells", "right", "green"), ("Share", "right", "yellow"), ("Note", "left", "magenta")],
    )
    total = max(sum(sizes), 1)
    for community, size in list(enumerate(sizes))[:limit]:
        table.add_row(
            str(community),
            format_count(size),
            format_percent(100.0 * size / total),
            highlight.get(community, ""),
        )
    if len(sizes) > limit:
        table.add_row("…", "", "", f"{len(sizes) - limit} more")
    return table


def create_header_panel(title: str, subtitle: str = "", border_style: str = "cyan") -> Panel:
    """Create a styled header panel.

    Args:
        title: Panel title
        subtitle: Optional second line
        border_style: Rich style for the border

    Returns:
        Panel: Configured Rich Panel
    """
    content = f"[bold cyan]{title}[/bold cyan]"
    if subtitle:
        content += f"\n{subtitle}"
    return Panel.fit(content, border_style=border_style, padding=(0, 1))


class StyleGuide:
    """Shared styles and icons."""

    header = "bold cyan"
    success = "green"
    error = "red"
    warning = "yellow"
    label = "cyan"
    metric = "green"
    dim = "dim"

    warning_icon = "[yellow]⚠[/yellow]"
