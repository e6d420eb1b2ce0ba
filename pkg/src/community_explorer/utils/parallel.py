"""
Order-preserving task runner over an optional process pool.

Results are placed by task position, so the output never depends on the
completion order or the worker count.
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Callable, List, Optional, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def run_tasks(
    fn: Callable[[T], R],
    tasks: Sequence[T],
    workers: Optional[int] = 1,
) -> List[R]:
    """Apply ``fn`` to every task.

    Args:
        fn: Picklable top-level function
        tasks: Task arguments
        workers: Process count; 1 (or fewer) runs sequentially in-process,
            None uses os.cpu_count()

    Returns:
        Results aligned with ``tasks``
    """
    if workers is not None and workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]

    results: List[Optional[R]] = [None] * len(tasks)
    # CPU-bound numpy work; processes sidestep the GIL
    with ProcessPoolExecutor(max_workers=workers) as executor:
        future_to_pos = {executor.submit(fn, task): pos for pos, task in enumerate(tasks)}
        for future in as_completed(future_to_pos):
            results[future_to_pos[future]] = future.result()
    logger.debug(f"Ran {len(tasks)} tasks on {workers or 'all'} workers")
    return results  # type: ignore[return-value]
