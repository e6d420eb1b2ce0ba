"""
Community-detection pipelines: DCD-TMHC, STM and the classical baselines.
"""

from community_explorer.pipelines.baselines import (
    elbow_communities,
    gap_communities,
    kmeans_communities,
)
from community_explorer.pipelines.models import (
    CommunityAssignment,
    StmConfig,
    TmhcConfig,
    TmhcTrace,
)
from community_explorer.pipelines.rowset import RowSet, as_rowset
from community_explorer.pipelines.stm import stm
from community_explorer.pipelines.tmhc import (
    dcd_tmhc,
    simulation_config,
    simulation_disk_config,
    tmhc_cluster,
)

__all__ = [
    "CommunityAssignment",
    "RowSet",
    "StmConfig",
    "TmhcConfig",
    "TmhcTrace",
    "as_rowset",
    "dcd_tmhc",
    "elbow_communities",
    "gap_communities",
    "kmeans_communities",
    "simulation_config",
    "simulation_disk_config",
    "stm",
    "tmhc_cluster",
]
