"""Deterministic parallel map used for grid sweeps.

Work items are independent; results are collected by index, so the output
does not depend on the number of workers or on completion order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "ANNULI_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Worker count from the explicit value, else ``ANNULI_THREADS``, else 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def pmap(func, items, threads: int | None = None) -> list:
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(func, items))
