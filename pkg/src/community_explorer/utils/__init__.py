"""
Utility modules for community-explorer.

- parallel: order-preserving process-pool task runner
- timer: step timing for CLI runs
"""

from community_explorer.utils.parallel import run_tasks
from community_explorer.utils.timer import Timer, TimerResult, TimingContext

__all__ = [
    "Timer",
    "TimerResult",
    "TimingContext",
    "run_tasks",
]
