"""
Process-pool job runner.

Jobs are plain picklable callables plus arguments; results come back in
job order, so any reduction over them is deterministic. The worker count
is capped by the CASCADE_LAB_THREADS environment variable.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional, Sequence

logger = logging.getLogger(__name__)

THREADS_ENV = "CASCADE_LAB_THREADS"


def available_parallelism() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def worker_count(requested: Optional[int] = None) -> int:
    """Workers to use: `requested` (or all CPUs), capped by CASCADE_LAB_THREADS."""
    count = requested or available_parallelism()
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            count = min(count, max(1, int(cap)))
        except ValueError:
            logger.warning("ignoring non-integer %s=%r", THREADS_ENV, cap)
    return max(1, count)


def run_jobs(fn: Callable[..., Any], jobs: Sequence[tuple], workers: Optional[int] = None) -> List[Any]:
    """
    Apply `fn(*job)` to every job.

    Runs in-process when one worker is enough, otherwise on a process
    pool. Results are returned in the order of `jobs`.
    """
    workers = min(worker_count(workers), len(jobs))
    if workers <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        return [future.result() for future in futures]
