"""Community Explorer - spatial cell community detection."""

from community_explorer.cli import cli

__version__ = "0.1.0"


def main() -> None:
    """Entry point for the CLI application."""
    cli()
