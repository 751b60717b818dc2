"""
Bounded, order-preserving parallel map.

Work items run through `asyncio.to_thread` behind a semaphore that caps the
number in flight (numpy releases the GIL inside its kernels). Results come
back in input order, so any reduction over them has a fixed summation order
regardless of thread count.
"""

import asyncio
import logging
import os
from typing import Callable, List, Optional, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "SPAN_THREADS"

_thread_count: Optional[int] = None


def resolve_threads(requested: Optional[int] = None) -> int:
    """
    Resolve a thread cap.

    Args:
        requested: Explicit cap; None reads SPAN_THREADS; 0 means auto (CPU count)

    Returns:
        Positive thread count
    """
    if requested is None:
        raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
        try:
            requested = int(raw)
        except ValueError:
            logger.warning(f"⚠️ Ignoring non-integer {THREADS_ENV}={raw!r}")
            requested = 0
    if requested < 0:
        logger.warning(f"⚠️ Negative thread count {requested} clamped to auto")
        requested = 0
    if requested == 0:
        return max(1, os.cpu_count() or 1)
    return requested


def get_thread_count() -> int:
    """Process-wide thread cap (resolved once from the environment)."""
    global _thread_count
    if _thread_count is None:
        _thread_count = resolve_threads()
        logger.debug(f"Internal parallelism capped at {_thread_count} thread(s)")
    return _thread_count


def set_thread_count(threads: int) -> None:
    """Override the process-wide thread cap."""
    global _thread_count
    _thread_count = resolve_threads(threads)


async def _gather_bounded(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    semaphore = asyncio.Semaphore(threads)

    async def run(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(fn, item)

    return list(await asyncio.gather(*(run(item) for item in items)))


def map_ordered(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
    """
    Apply `fn` to every item, possibly concurrently, preserving input order.

    Args:
        fn: Pure function of one item (must not mutate shared state)
        items: Work items
        threads: Thread cap; None uses the process-wide setting

    Returns:
        List of results aligned with `items`
    """
    items = list(items)
    threads = get_thread_count() if threads is None else resolve_threads(threads)
    if threads == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return asyncio.run(_gather_bounded(fn, items, min(threads, len(items))))
