"""Deterministic order-preserving parallel map over per-element work."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def default_threads():
    try:
        return max(1, int(os.environ.get("DDR_THREADS", "1")))
    except ValueError:
        return 1


def thread_map(fn, items, threads=None):
    """Map fn over items, preserving order.  Results are identical for any
    thread count because each item's computation is independent and pure."""
    if threads is None:
        threads = default_threads()
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
