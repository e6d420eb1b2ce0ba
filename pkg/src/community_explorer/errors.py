"""
Exception hierarchy for community-explorer.

Every domain error carries a stable ``code`` so the CLI can report it as a
machine-readable JSON object on the error stream.
"""

from typing import Any, Dict, Optional


class CommunityExplorerError(Exception):
    """Base class for all domain errors.

    Attributes:
        code: Stable identifier used in JSON error reports
        details: Extra structured context (row numbers, sizes, ...)
    """

    code = "community_explorer_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Render the error as a JSON-serializable dictionary."""
        return {"error": self.code, "message": self.message, **self.details}


# Ingestion


class MissingColumn(CommunityExplorerError):
    """A required schema role is unmapped or its column is absent."""

    code = "missing_column"


class ParseError(CommunityExplorerError):
    """A data row could not be parsed (1-based data row number in ``row``)."""

    code = "parse_error"

    def __init__(self, message: str, row: int, column: Optional[str] = None):
        super().__init__(message, {"row": row, "column": column})
        self.row = row
        self.column = column


class EmptyInput(CommunityExplorerError):
    """The input stream holds no data rows."""

    code = "empty_input"


class DuplicateCellId(CommunityExplorerError):
    """Two data rows share one cell_id."""

    code = "duplicate_cell_id"


# Neighborhoods


class EmptyScope(CommunityExplorerError):
    """A spatial index was requested over zero cells."""

    code = "empty_scope"


class NoRowsRetained(CommunityExplorerError):
    """Every disk was excluded; r, the margin or min_cells is misconfigured."""

    code = "no_rows_retained"


class ScopeTooSmall(CommunityExplorerError):
    """A scope holds k or fewer cells, so k neighbours cannot be found."""

    code = "scope_too_small"


# Transform


class AllZeroRow(CommunityExplorerError):
    """A composition row has zero total count."""

    code = "all_zero_row"


# Clustering


class KTooLarge(CommunityExplorerError):
    """More clusters were requested than there are rows."""

    code = "k_too_large"


class ResourceExceeded(CommunityExplorerError):
    """A computation would exceed its configured budget."""

    code = "resource_exceeded"


class DegenerateData(CommunityExplorerError):
    """Rows have zero total variation."""

    code = "degenerate_data"


class InsufficientRows(CommunityExplorerError):
    """Fewer rows than a test needs."""

    code = "insufficient_rows"


# Simulation


class RejectionStall(CommunityExplorerError):
    """A region constraint accepts almost no generated points."""

    code = "rejection_stall"


# Evaluation


class LengthMismatch(CommunityExplorerError):
    """Two partitions do not label the same number of elements."""

    code = "length_mismatch"


class UnknownCellType(CommunityExplorerError):
    """A requested cell-type name is not in the registry."""

    code = "unknown_cell_type"


class UnknownCommunity(CommunityExplorerError):
    """A community index does not exist in the assignment."""

    code = "unknown_community"


class MissingStageLabel(CommunityExplorerError):
    """A sample has no primary/metastasis label."""

    code = "missing_stage_label"


class DegenerateDesign(CommunityExplorerError):
    """The logistic predictor is constant."""

    code = "degenerate_design"


class SingleClass(CommunityExplorerError):
    """The logistic response holds only one class."""

    code = "single_class"


# Configuration


class ConfigError(CommunityExplorerError):
    """A configuration file could not be read or holds invalid values."""

    code = "config_error"


class MissingArgument(CommunityExplorerError):
    """A command was given none of the inputs it can work from."""

    code = "missing_argument"
