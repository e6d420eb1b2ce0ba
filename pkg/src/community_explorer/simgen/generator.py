"""
Simulated spatial cell data with intended community labels.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np
from codetiming import Timer

from community_explorer.data.models import CellTypeRegistry, Dataset
from community_explorer.errors import RejectionStall
from community_explorer.pipelines.models import CommunityAssignment
from community_explorer.seeding import derive_rng
from community_explorer.simgen.models import UNIT, Draw, SimDataset, SimSetting, in_region
from community_explorer.simgen.settings import get_setting

logger = logging.getLogger(__name__)

MIN_REGION_SHARE = 1e-4


def type_name(cell_type: int) -> str:
    return f"cell_{cell_type}"


def split_count(total: int, shares: List[float]) -> List[int]:
    """Divide a count by percentage shares, rounding down.

    The units lost to rounding go to the parts in order, starting with the
    first, so the parts always sum to ``total``.
    """
    counts = [int(np.floor(total * s / 100.0 + 1e-9)) for s in shares]
    for i in range(total - sum(counts)):
        counts[i % len(counts)] += 1
    return counts


def _draw_count(draw: Draw, rng: np.random.Generator, scale: float) -> int:
    raw = int(rng.integers(int(draw.low * UNIT), int(draw.high * UNIT) + 1))
    return int(round(raw * scale))


Chunk = Tuple[int, int, np.ndarray, np.ndarray]  # community, cell type, x, y


def _generate_draw(setting: SimSetting, index: int, draw: Draw, seed: int, scale: float) -> List[Chunk]:
    rng = derive_rng(seed, "simgen", setting.id, "draw", index)
    total = _draw_count(draw, rng, scale)

    if draw.routed_law is not None:
        x, y = draw.routed_law.sample(rng, total)
        inside = in_region(x, y)
        chunks = []
        for part in draw.parts:
            mask = inside if part.region == "inside" else ~inside
            if total and mask.mean() < MIN_REGION_SHARE:
                raise RejectionStall(
                    f"Setting {setting.id}: region {part.region!r} received "
                    f"{int(mask.sum())} of {total} points",
                    {"setting": setting.id, "region": part.region, "share": float(mask.mean())},
                )
            chunks.append((part.community, part.cell_type, x[mask], y[mask]))
        return chunks

    counts = split_count(total, [p.share for p in draw.parts])
    chunks = []
    for j, (part, n) in enumerate(zip(draw.parts, counts)):
        part_rng = derive_rng(seed, "simgen", setting.id, "draw", index, "part", j)
        x, y = part.law.sample(part_rng, n)
        chunks.append((part.community, part.cell_type, x, y))
    return chunks


def simulate(setting: int, seed: int = 0, scale: float = 1.0) -> SimDataset:
    """Generate one simulation setting.

    Cells are ordered by intended community, then by the setting's draw order,
    and named "1".."N". All cells belong to sample ``sim<setting>`` without FOVs.

    Args:
        setting: Setting id (1-5)
        seed: Top-level seed
        scale: Fraction of the drawn counts to keep, in (0, 1]

    Returns:
        SimDataset with 0-based intended community labels

    Raises:
        RejectionStall: A routed region receives almost no points
        ValueError: Unknown setting, scale outside (0, 1], or a community left empty
    """
    if not 0 < scale <= 1:
        raise ValueError(f"scale must lie in (0, 1], got {scale}")
    layout = get_setting(setting)

    with Timer(name="simulate", text="Simulation generated in {:.2f}s", logger=logger.info):
        by_community: Dict[int, List[Chunk]] = {c: [] for c in range(1, layout.n_communities + 1)}
        for index, draw in enumerate(layout.draws):
            for chunk in _generate_draw(layout, index, draw, seed, scale):
                by_community[chunk[0]].append(chunk)

        xs, ys, types, communities = [], [], [], []
        for community, chunks in by_community.items():
            if sum(c[2].size for c in chunks) == 0:
                raise ValueError(f"Community {community} is empty at scale {scale}; increase scale")
            for _, cell_type, x, y in chunks:
                xs.append(x)
                ys.append(y)
                types.append(np.full(x.size, cell_type - 1, dtype=np.int64))
                communities.append(np.full(x.size, community - 1, dtype=np.int64))

    n = int(sum(x.size for x in xs))
    sample = f"sim{setting}"
    registry = CellTypeRegistry(tuple(type_name(t) for t in range(1, layout.n_types + 1)))
    cell_ids = np.array([str(i) for i in range(1, n + 1)], dtype=object)
    dataset = Dataset(
        cell_ids=cell_ids,
        sample_ids=np.full(n, sample, dtype=object),
        fov_ids=None,
        x=np.concatenate(xs),
        y=np.concatenate(ys),
        cell_types=np.concatenate(types),
        registry=registry,
        samples=(sample,),
    )
    truth = CommunityAssignment(
        cell_ids=cell_ids,
        labels=np.concatenate(communities),
        method="truth",
        config={"setting": setting, "scale": scale},
        seed=seed,
        row_samples=dataset.sample_ids,
    )
    logger.info(f"Simulation {setting}: N={n:,} cells, {layout.n_communities} intended communities")
    return SimDataset(dataset=dataset, truth=truth, setting=setting, seed=seed, scale=scale)
