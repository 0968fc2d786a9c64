"""Deterministic fan-out helper honoring the SHIMURA_CALC_THREADS cap."""

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """Number of worker threads to use; SHIMURA_CALC_THREADS overrides."""
    env = os.environ.get("SHIMURA_CALC_THREADS")
    if env is None:
        return os.cpu_count() or 1
    n = int(env)
    if n < 1:
        raise ValueError("SHIMURA_CALC_THREADS must be a positive integer")
    return n


def parallel_map(fn, items):
    """Map fn over items, preserving order regardless of worker count."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
