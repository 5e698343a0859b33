"""Thread pool sizing and order-preserving parallel map.

NCTORUS_THREADS caps worker count (default 1, i.e. serial).  Results are
collected in submission order, so reductions over them are bit-identical
whatever the cap; parallelism must never change output bytes.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

__all__ = ["thread_count", "ordered_map"]


def thread_count() -> int:
    raw = os.environ.get("NCTORUS_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"NCTORUS_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def ordered_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    seq: Sequence[T] = list(items)
    workers = thread_count()
    if workers == 1 or len(seq) <= 1:
        return [fn(x) for x in seq]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seq))
