"""
Simulation settings with intended communities.
"""

from community_explorer.simgen.generator import simulate, split_count, type_name
from community_explorer.simgen.models import (
    Draw,
    EllipseLaw,
    NormalLaw,
    Part,
    SimDataset,
    SimSetting,
    UniformLaw,
    in_region,
)
from community_explorer.simgen.settings import SETTINGS, get_setting

__all__ = [
    "Draw",
    "EllipseLaw",
    "NormalLaw",
    "Part",
    "SETTINGS",
    "SimDataset",
    "SimSetting",
    "UniformLaw",
    "get_setting",
    "in_region",
    "simulate",
    "split_count",
    "type_name",
]
