"""
Scoring, profiling and stage analysis of detected communities.
"""

from community_explorer.evaluation.ari import ari, ari_assignments, contingency_table
from community_explorer.evaluation.fractions import sample_fractions
from community_explorer.evaluation.logistic import (
    detect_separation,
    log_likelihood,
    logistic_curve,
    logistic_fit,
    score,
    stage_curves,
)
from community_explorer.evaluation.models import (
    AriReport,
    CommunityProfile,
    LogisticFit,
    SampleFractionTable,
)
from community_explorer.evaluation.profiles import community_profiles

__all__ = [
    "AriReport",
    "CommunityProfile",
    "LogisticFit",
    "SampleFractionTable",
    "ari",
    "ari_assignments",
    "community_profiles",
    "contingency_table",
    "detect_separation",
    "log_likelihood",
    "logistic_curve",
    "logistic_fit",
    "sample_fractions",
    "score",
    "stage_curves",
]
