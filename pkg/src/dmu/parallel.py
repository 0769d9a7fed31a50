"""Deterministic parallel map.

Results are always returned in input order, so reductions over them are
schedule independent.  ``DMU_THREADS`` caps the worker count (1 disables
threading).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("DMU_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = min(8, os.cpu_count() or 1)
    return max(1, n)


def ordered_map(fn, items) -> list:
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
