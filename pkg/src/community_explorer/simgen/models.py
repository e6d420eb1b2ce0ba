"""
Simulation setting models.

Distribution parameters use the convention 1 = 1000: U(a, b) is uniform on
(1000a, 1000b); N(μ, σ²) has mean 1000μ and variance 1000σ²; counts drawn from
U{a, b} are integers in [1000a, 1000b].
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from community_explorer.data.models import Dataset
from community_explorer.pipelines.models import CommunityAssignment

UNIT = 1000.0
REGION_BOUNDS = (3995.0, 4705.0)


class SpatialLaw:
    """Joint law of (X, Y) in simulation units."""

    def sample(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError


@dataclass(frozen=True)
class UniformLaw(SpatialLaw):
    """X ~ U(x_low, x_high), Y ~ U(y_low, y_high), independent."""

    x_low: float
    x_high: float
    y_low: float
    y_high: float

    def sample(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        x = rng.uniform(self.x_low * UNIT, self.x_high * UNIT, n)
        y = rng.uniform(self.y_low * UNIT, self.y_high * UNIT, n)
        return x, y


@dataclass(frozen=True)
class NormalLaw(SpatialLaw):
    """X ~ N(x_mean, variance), Y ~ N(y_mean, variance), independent."""

    x_mean: float
    y_mean: float
    variance: float

    @property
    def sd(self) -> float:
        return math.sqrt(UNIT * self.variance)

    def sample(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        x = rng.normal(self.x_mean * UNIT, self.sd, n)
        y = rng.normal(self.y_mean * UNIT, self.sd, n)
        return x, y


@dataclass(frozen=True)
class EllipseLaw(SpatialLaw):
    """θ ~ U(0, 2π); X = rx·cos θ + cx, Y = ry·sin θ + cy (the annulus ring)."""

    cx: float = 0.8
    cy: float = 0.0
    rx: float = 0.4
    ry: float = 0.25

    def sample(self, rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
        theta = rng.uniform(0.0, 2.0 * math.pi, n)
        x = self.rx * UNIT * np.cos(theta) + self.cx * UNIT
        y = self.ry * UNIT * np.sin(theta) + self.cy * UNIT
        return x, y


def in_region(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Membership in R = [3995, 4705] × [3995, 4705]."""
    lo, hi = REGION_BOUNDS
    return (x >= lo) & (x <= hi) & (y >= lo) & (y <= hi)


@dataclass(frozen=True)
class Part:
    """Cells of one type placed in one intended community.

    Attributes:
        cell_type: 1-based cell type
        community: 1-based intended community
        law: Spatial law (ignored for routed parts, which share the draw's law)
        share: Percentage of the draw (None for routed parts)
        region: "inside" or "outside" R for routed parts
    """

    cell_type: int
    community: int
    law: Optional[SpatialLaw] = None
    share: Optional[float] = 100.0
    region: Optional[str] = None


@dataclass(frozen=True)
class Draw:
    """One count drawn from U{low, high} (×1000) and divided among parts.

    A draw with ``routed_law`` generates every point from that law and hands
    each point to the part whose region contains it.
    """

    low: int
    high: int
    parts: Tuple[Part, ...]
    routed_law: Optional[SpatialLaw] = None

    def __post_init__(self) -> None:
        if self.routed_law is None:
            total = sum(p.share or 0.0 for p in self.parts)
            if abs(total - 100.0) > 1e-9:
                raise ValueError(f"Part shares must sum to 100%, got {total}")
        elif {p.region for p in self.parts} != {"inside", "outside"}:
            raise ValueError("A routed draw needs one inside and one outside part")


@dataclass(frozen=True)
class SimSetting:
    """One simulation setting: its draws and intended community count."""

    id: int
    low: int
    high: int
    draws: Tuple[Draw, ...]
    n_communities: int
    n_types: int


@dataclass(frozen=True, eq=False)
class SimDataset:
    """Simulated cells and their intended communities (0-based labels)."""

    dataset: Dataset
    truth: CommunityAssignment
    setting: int
    seed: int
    scale: float
