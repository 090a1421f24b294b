"""Order-preserving parallel map used by searches and sampling loops.

Results are collected in input order, so output never depends on thread
scheduling; threads=1 degenerates to a plain loop.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

__all__ = ["pmap"]


def pmap(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
