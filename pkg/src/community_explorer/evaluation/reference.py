"""
Published CosMx reference values.

The eight-sample breast cancer cohort (four patients, each with one primary
and one metastasis sample) and, for the communities with the highest tumor,
immune and normal cell share found by four methods, the per-sample community
percentages with the logistic estimates printed for them.
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple


@dataclass(frozen=True)
class ReferenceSample:
    name: str
    number: int
    size: int
    patient: int
    stage: str
    tissue: str

    @property
    def primary(self) -> int:
        return 1 if self.stage == "Primary" else 0


@dataclass(frozen=True)
class ReferenceRow:
    """One method's x row for a flagged community, with the printed fit."""

    flag: str  # tumor, immune or normal
    method: str
    community: int  # 1-based, as printed
    community_percent: float
    x: Tuple[float, ...]
    alpha: float
    beta: float

    @property
    def y(self) -> Tuple[int, ...]:
        return STAGES


SAMPLES: Tuple[ReferenceSample, ...] = (
    ReferenceSample("AER8-TTP1", 1, 59_556, 1, "Primary", "Breast"),
    ReferenceSample("AER8-TTM2", 2, 57_045, 1, "Metastasis", "Liver"),
    ReferenceSample("AFE4-TTP1", 3, 20_495, 2, "Primary", "Breast"),
    ReferenceSample("AFE4-TTM6", 4, 84_168, 2, "Metastasis", "Liver"),
    ReferenceSample("RA11-044-PRIM", 5, 48_092, 4, "Primary", "Breast"),
    ReferenceSample("RA11-044-MET", 6, 97_895, 4, "Metastasis", "Lung"),
    ReferenceSample("RA11-049-PRIM", 7, 113_317, 3, "Primary", "Breast"),
    ReferenceSample("RA11-049-MET", 8, 121_066, 3, "Metastasis", "Liver"),
)

STAGES: Tuple[int, ...] = tuple(s.primary for s in SAMPLES)

METHODS = ("DCD-TMHC", "STM", "10-Means", "Elbow k-Means")

ROWS: Tuple[ReferenceRow, ...] = (
    ReferenceRow("tumor", "DCD-TMHC", 5, 99.7, (0.40, 39.30, 3.26, 12.58, 7.28, 6.95, 2.98, 0.59), 1.375, -0.219),
    ReferenceRow("tumor", "STM", 3, 98.7, (0.87, 42.30, 3.74, 14.62, 7.43, 6.78, 2.93, 0.64), 1.344, -0.199),
    ReferenceRow("tumor", "10-Means", 5, 97.3, (3.06, 49.58, 7.28, 46.69, 24.86, 17.54, 11.85, 2.69), 1.354, -0.071),
    ReferenceRow("tumor", "Elbow k-Means", 3, 98.8, (1.17, 44.69, 4.66, 29.73, 10.86, 7.87, 4.82, 1.36), 1.245, -0.119),
    ReferenceRow("immune", "DCD-TMHC", 19, 62.2, (0.18, 0.05, 0.47, 0.04, 0.78, 0.07, 0.00, 0.00), -1.566, 14.073),
    ReferenceRow("immune", "STM", 32, 47.95, (1.07, 0.57, 5.27, 0.18, 1.36, 0.30, 0.00, 0.00), -1.640, 2.691),
    ReferenceRow("immune", "10-Means", 8, 27.4, (0.63, 0.42, 4.32, 0.31, 3.34, 10.37, 0.25, 0.02), 0.142, -0.058),
    ReferenceRow("immune", "Elbow k-Means", 12, 50.6, (1.06, 0.25, 5.77, 0.25, 1.91, 1.29, 0.01, 0.00), -1.163, 1.251),
    ReferenceRow("normal", "DCD-TMHC", 14, 61.4, (1.36, 0.00, 1.43, 0.00, 0.07, 0.00, 0.00, 0.00), -1.386, 273.171),
    ReferenceRow("normal", "STM", 40, 76.8, (0.59, 0.00, 0.09, 0.00, 0.01, 0.00, 0.00, 0.00), -1.386, 2660.943),
    ReferenceRow("normal", "10-Means", 1, 47.8, (4.41, 0.00, 13.04, 0.00, 0.76, 0.00, 0.00, 0.00), -1.386, 26.804),
    ReferenceRow("normal", "Elbow k-Means", 13, 51.0, (4.28, 0.00, 11.52, 0.00, 0.60, 0.00, 0.00, 0.00), -1.386, 33.942),
)


def primary_map() -> Dict[str, int]:
    """Sample name to 1 (primary) or 0 (metastasis)."""
    return {s.name: s.primary for s in SAMPLES}


def rows_for(flag: str) -> List[ReferenceRow]:
    """Reference rows of one flag, in method order."""
    rows = [r for r in ROWS if r.flag == flag]
    if not rows:
        raise ValueError(f"Unknown flag {flag!r}; choose tumor, immune or normal")
    return rows


def get_row(flag: str, method: str) -> ReferenceRow:
    for row in rows_for(flag):
        if row.method.lower() == method.lower():
            return row
    raise ValueError(f"No reference row for method {method!r}; choose from {METHODS}")
