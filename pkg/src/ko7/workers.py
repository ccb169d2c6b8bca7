"""Optional worker-pool execution for sweeps.

Sweeps partition the term enumeration into contiguous chunks, run one
chunk per worker, and merge the partial reports in chunk order, so output
is identical for any worker count.  The KO7_WORKERS environment variable
caps how many workers sweep subcommands may use (default 1: serial).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

R = TypeVar("R")


def env_worker_cap() -> int:
    raw = os.environ.get("KO7_WORKERS", "1")
    try:
        cap = int(raw)
    except ValueError:
        return 1
    return max(1, cap)


def resolve_workers() -> int:
    return min(env_worker_cap(), os.cpu_count() or 1)


def chunk_bounds(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total))
    base, extra = divmod(total, workers)
    bounds = []
    lo = 0
    for i in range(workers):
        hi = lo + base + (1 if i < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def run_chunks(worker: Callable[[tuple], R], chunks: Sequence[tuple], workers: int) -> list[R]:
    """Apply `worker` to each chunk tuple, in a process pool when
    workers > 1.  Results come back in chunk order."""
    if workers <= 1 or len(chunks) <= 1:
        return [worker(chunk) for chunk in chunks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, chunks))
