"""Deterministic parallel map over streams.

Results always come back in input order, so every downstream reduction
is byte-identical no matter how many workers run. Workers are OS
processes (pure-Python scans are CPU-bound); items are consumed in
bounded batches to keep memory independent of stream length.
"""

from __future__ import annotations

import itertools
import multiprocessing
from typing import Callable, Iterable, Iterator, TypeVar

T = TypeVar("T")
R = TypeVar("R")

BATCH_PER_WORKER = 512


def pmap_ordered(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1,
    batch_per_worker: int = BATCH_PER_WORKER,
) -> Iterator[R]:
    if workers <= 1:
        yield from map(fn, items)
        return
    it = iter(items)
    batch_size = batch_per_worker * workers
    with multiprocessing.Pool(workers) as pool:
        while True:
            batch = list(itertools.islice(it, batch_size))
            if not batch:
                break
            yield from pool.map(fn, batch, chunksize=batch_per_worker)
