"""
Per-sample share of cells in one community.
"""

import logging
from typing import Mapping

import numpy as np

from community_explorer.data.models import Dataset
from community_explorer.errors import MissingStageLabel, UnknownCommunity
from community_explorer.evaluation.models import SampleFractionTable
from community_explorer.pipelines.models import CommunityAssignment

logger = logging.getLogger(__name__)


def sample_fractions(
    assignment: CommunityAssignment,
    community: int,
    dataset: Dataset,
    primary_map: Mapping[str, int],
) -> SampleFractionTable:
    """Build the (x_i, y_i) table used by the stage regression.

    N_i counts the labeled cells of sample i, k_i those of them in ``community``
    and x_i = 100 · k_i / N_i. Samples with no labeled cell are left out.

    Args:
        assignment: Community labels per cell
        community: Community index (0-based)
        dataset: Dataset the labeled cells come from
        primary_map: Sample id to 1 (primary) or 0 (metastasis)

    Raises:
        UnknownCommunity: ``community`` is not a label of the assignment
        MissingStageLabel: A sample with labeled cells is absent from ``primary_map``
        ValueError: A stage label is not 0 or 1
    """
    if not 0 <= community < assignment.n_communities:
        raise UnknownCommunity(
            f"Community {community} not in [0, {assignment.n_communities})",
            {"community": community, "n_communities": assignment.n_communities},
        )

    idx = dataset.indices_of(assignment.cell_ids.tolist())
    cell_samples = dataset.sample_ids[idx]
    in_community = assignment.labels == community

    samples, xs, ys, ks, totals = [], [], [], [], []
    for sample in dataset.samples:
        mask = cell_samples == sample
        n_i = int(mask.sum())
        if n_i == 0:
            logger.warning(f"Sample {sample} has no labeled cells; omitted")
            continue
        if sample not in primary_map:
            raise MissingStageLabel(f"No primary/metastasis label for sample {sample!r}", {"sample": sample})
        stage = int(primary_map[sample])
        if stage not in (0, 1):
            raise ValueError(f"Stage label for {sample!r} must be 0 or 1, got {primary_map[sample]!r}")
        k_i = int((mask & in_community).sum())
        samples.append(sample)
        xs.append(100.0 * k_i / n_i)
        ys.append(stage)
        ks.append(k_i)
        totals.append(n_i)

    return SampleFractionTable(
        community=community,
        samples=tuple(samples),
        x=np.array(xs, dtype=float),
        y=np.array(ys, dtype=np.int64),
        k=np.array(ks, dtype=np.int64),
        totals=np.array(totals, dtype=np.int64),
    )
