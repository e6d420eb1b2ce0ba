"""
The five simulation settings.

Each cell type's count is one draw from the setting's discrete uniform unless
noted; percentage shares divide that draw across communities.
"""

from typing import Dict

from community_explorer.simgen.models import (
    Draw,
    EllipseLaw,
    NormalLaw,
    Part,
    SimSetting,
    UniformLaw,
)

RING = EllipseLaw(cx=0.8, cy=0.0, rx=0.4, ry=0.25)


def _single(low: int, high: int, cell_type: int, community: int, law) -> Draw:
    return Draw(low, high, (Part(cell_type, community, law),))


def _setting_1() -> SimSetting:
    lo, hi = 10, 25
    c4 = NormalLaw(8, 0, 50)
    return SimSetting(
        id=1,
        low=lo,
        high=hi,
        draws=(
            _single(lo, hi, 1, 1, NormalLaw(0, 0, 250)),
            _single(lo, hi, 2, 2, NormalLaw(4, 4, 250)),
            _single(lo, hi, 3, 3, NormalLaw(10, 10, 250)),
            Draw(6, 8, (Part(1, 4, c4, 50.0), Part(2, 4, c4, 50.0))),
        ),
        n_communities=4,
        n_types=3,
    )


def _setting_2() -> SimSetting:
    lo, hi = 10, 15
    upper_mid = UniformLaw(0.35, 0.85, 0.5, 1.0)
    return SimSetting(
        id=2,
        low=lo,
        high=hi,
        draws=(
            _single(lo, hi, 1, 1, UniformLaw(-0.25, 0.25, -0.25, 0.25)),
            Draw(lo, hi, (
                Part(2, 2, UniformLaw(-0.25, 0.25, 0.5, 1.0), 50.0),
                Part(2, 3, upper_mid, 50.0),
            )),
            Draw(lo, hi, (
                Part(3, 3, upper_mid, 50.0),
                Part(3, 4, UniformLaw(1.15, 1.65, 0.5, 1.0), 50.0),
            )),
            Draw(lo, hi, (
                Part(4, 5, UniformLaw(0.7, 1.0, -0.15, 0.15), 50.0),
                Part(4, 5, RING, 50.0),
            )),
        ),
        n_communities=5,
        n_types=4,
    )


def _setting_3() -> SimSetting:
    lo, hi = 100, 150
    return SimSetting(
        id=3,
        low=lo,
        high=hi,
        draws=(
            _single(lo, hi, 1, 1, NormalLaw(2, 2, 100)),
            Draw(
                lo,
                hi,
                (Part(2, 2, share=None, region="outside"), Part(2, 4, share=None, region="inside")),
                routed_law=NormalLaw(4, 4, 100),
            ),
            _single(lo, hi, 3, 3, NormalLaw(8, 8, 100)),
            Draw(lo, hi, (
                Part(4, 4, UniformLaw(4.0, 4.7, 4.0, 4.7), 44.0),
                Part(4, 5, UniformLaw(5.0, 6.0, 8.5, 9.2), 56.0),
            )),
        ),
        n_communities=5,
        n_types=4,
    )


def _setting_4() -> SimSetting:
    lo, hi = 90, 120
    center = UniformLaw(-0.25, 0.25, -0.25, 0.25)
    upper_mid = UniformLaw(0.35, 0.85, 0.5, 1.0)
    return SimSetting(
        id=4,
        low=lo,
        high=hi,
        draws=(
            Draw(lo, hi, (
                Part(1, 1, UniformLaw(-0.55, -0.35, -0.25, 0.25), 45.0),
                Part(1, 2, center, 55.0),
            )),
            Draw(lo, hi, (
                Part(2, 3, UniformLaw(-0.25, 0.25, 0.5, 1.0), 45.0),
                Part(2, 4, upper_mid, 55.0),
            )),
            Draw(lo, hi, (
                Part(3, 4, upper_mid, 45.0),
                Part(3, 5, UniformLaw(1.15, 1.65, 0.5, 1.0), 55.0),
            )),
            Draw(lo, hi, (
                Part(4, 2, center, 45.0),
                Part(4, 6, UniformLaw(0.35, 0.85, 1.1, 1.35), 55.0),
            )),
            Draw(lo, hi, (
                Part(5, 7, UniformLaw(0.7, 1.0, -0.15, 0.15), 45.0),
                Part(5, 7, RING, 55.0),
            )),
        ),
        n_communities=7,
        n_types=5,
    )


def _setting_5() -> SimSetting:
    lo, hi = 150, 200
    c5 = UniformLaw(5.5, 6.5, 8.5, 9.2)
    c7 = NormalLaw(8, 2, 90)
    return SimSetting(
        id=5,
        low=lo,
        high=hi,
        draws=(
            _single(lo, hi, 1, 1, NormalLaw(2, 2, 100)),
            Draw(
                lo,
                hi,
                (Part(2, 2, share=None, region="outside"), Part(2, 4, share=None, region="inside")),
                routed_law=NormalLaw(4, 4, 100),
            ),
            _single(lo, hi, 3, 3, NormalLaw(8, 8, 100)),
            Draw(lo, hi, (
                Part(4, 4, UniformLaw(4.0, 4.7, 4.0, 4.7), 58.0),
                Part(4, 5, c5, 42.0),
            )),
            Draw(lo, hi, (
                Part(5, 5, c5, 58.0),
                Part(5, 6, UniformLaw(2.5, 4.5, 8.5, 9.2), 42.0),
            )),
            _single(30, 50, 1, 7, c7),
            _single(30, 50, 2, 7, c7),
        ),
        n_communities=7,
        n_types=5,
    )


SETTINGS: Dict[int, SimSetting] = {
    s.id: s for s in (_setting_1(), _setting_2(), _setting_3(), _setting_4(), _setting_5())
}


def get_setting(setting_id: int) -> SimSetting:
    """Look up a setting by id (1-5)."""
    if setting_id not in SETTINGS:
        raise ValueError(f"Unknown simulation setting {setting_id}; choose 1-5")
    return SETTINGS[setting_id]
