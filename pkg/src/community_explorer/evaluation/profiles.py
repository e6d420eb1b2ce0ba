"""
Cell-type make-up of detected communities.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from community_explorer.data.models import Dataset
from community_explorer.errors import UnknownCellType
from community_explorer.evaluation.models import CommunityProfile
from community_explorer.pipelines.models import CommunityAssignment

logger = logging.getLogger(__name__)

DEFAULT_TUMOR = ("tumor",)
DEFAULT_IMMUNE = ("B-plasma", "T")
DEFAULT_NORMAL = ("normal-BEC",)


def _resolve(dataset: Dataset, names: Sequence[str]) -> Optional[list]:
    lookup = {name.lower(): i for i, name in enumerate(dataset.registry.names)}
    found = [lookup.get(name.lower()) for name in names]
    if any(i is None for i in found):
        return None
    return found


def _highest(percentages: np.ndarray, columns: list) -> int:
    # np.argmax keeps the first maximum, so ties go to the lower community
    return int(np.argmax(percentages[:, columns].sum(axis=1)))


def community_profiles(
    assignment: CommunityAssignment,
    dataset: Dataset,
    tumor: Optional[Sequence[str]] = None,
    immune: Optional[Sequence[str]] = None,
    normal: Optional[Sequence[str]] = None,
) -> CommunityProfile:
    """Percentage of each cell type among the center cells of every community.

    Highest-tumor, highest-immune and highest-normal communities are flagged
    when the registry holds the flag types (matched case-insensitively). With
    the default names missing the flags are disabled with a warning; names the
    caller passes explicitly must exist.

    Args:
        assignment: Community labels per cell
        dataset: Dataset the labeled cells come from
        tumor: Cell types counted as tumor (default "tumor")
        immune: Cell types summed as immune (default "B-plasma" and "T")
        normal: Cell types counted as normal (default "normal-BEC")

    Returns:
        CommunityProfile with one percentage row per community

    Raises:
        UnknownCellType: An explicitly requested flag type is not in the registry
        KeyError: A labeled cell_id is not in the dataset
    """
    idx = dataset.indices_of(assignment.cell_ids.tolist())
    k, m = assignment.n_communities, dataset.m
    counts = np.zeros((k, m), dtype=np.int64)
    np.add.at(counts, (assignment.labels, dataset.cell_types[idx]), 1)
    sizes = counts.sum(axis=1)
    percentages = 100.0 * counts / np.maximum(sizes, 1)[:, None]

    explicit = any(v is not None for v in (tumor, immune, normal))
    groups = {
        "tumor": tumor or DEFAULT_TUMOR,
        "immune": immune or DEFAULT_IMMUNE,
        "normal": normal or DEFAULT_NORMAL,
    }
    columns = {key: _resolve(dataset, names) for key, names in groups.items()}
    missing = {key: list(groups[key]) for key, cols in columns.items() if cols is None}

    if missing:
        if explicit:
            raise UnknownCellType(
                f"Cell types not in registry: {missing}",
                {"missing": missing, "registry": list(dataset.registry.names)},
            )
        logger.warning(f"Community flags disabled; registry lacks {missing}")
        return CommunityProfile(
            type_names=tuple(dataset.registry.names), sizes=sizes, percentages=percentages
        )

    profile = CommunityProfile(
        type_names=tuple(dataset.registry.names),
        sizes=sizes,
        percentages=percentages,
        highest_tumor=_highest(percentages, columns["tumor"]),
        highest_immune=_highest(percentages, columns["immune"]),
        highest_normal=_highest(percentages, columns["normal"]),
    )
    logger.info(
        f"Highest communities: tumor={profile.highest_tumor}, "
        f"immune={profile.highest_immune}, normal={profile.highest_normal}"
    )
    return profile
