"""Ordered parallel map honoring TWOEC_THREADS."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

A = TypeVar("A")
B = TypeVar("B")


def thread_count() -> int:
    raw = os.environ.get("TWOEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn: Callable[[A], B], items: Iterable[A]) -> list[B]:
    """``list(map(fn, items))``, spread over threads; results keep input order."""
    seq = list(items)
    k = thread_count()
    if k == 1 or len(seq) < 2:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, seq))
