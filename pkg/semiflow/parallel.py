"""
Chunked thread-pool evaluation with order-preserving reassembly.

Results never depend on the worker count: chunks are contiguous index ranges
and are concatenated in chunk order.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

import numpy as np

from .errors import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "SEMIFLOW_THREADS"

T = TypeVar("T")


def worker_count(environ: Optional[dict] = None) -> int:
    """
    Worker cap from the SEMIFLOW_THREADS environment variable.

    Raises:
        ConfigError: If the variable is set but not a positive integer
    """
    env = os.environ if environ is None else environ
    raw = env.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def chunk_bounds(total: int, chunk_size: int) -> List[tuple]:
    """Contiguous [start, stop) ranges covering range(total)."""
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def map_ordered(
    func: Callable[[int, int], T], total: int, chunk_size: int, workers: Optional[int] = None
) -> List[T]:
    """
    Evaluate ``func(start, stop)`` over contiguous chunks, returning results in chunk order.

    Args:
        func: Callable receiving a half-open index range
        total: Number of items
        chunk_size: Items per chunk
        workers: Thread cap (default: worker_count())

    Returns:
        List of per-chunk results in ascending chunk order
    """
    logger.debug("map_ordered() entry")
    bounds = chunk_bounds(total, chunk_size)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(bounds) <= 1:
        results = [func(start, stop) for start, stop in bounds]
        logger.debug("map_ordered() exit - serial")
        return results

    with ThreadPoolExecutor(max_workers=min(workers, len(bounds))) as pool:
        futures = [pool.submit(func, start, stop) for start, stop in bounds]
        results = [future.result() for future in futures]
    logger.debug(f"map_ordered() exit - {len(bounds)} chunks on {workers} workers")
    return results


def map_array(
    func: Callable[[np.ndarray], np.ndarray],
    items: np.ndarray,
    chunk_size: int = 2048,
    workers: Optional[int] = None,
) -> np.ndarray:
    """Apply an array function chunk-wise along axis 0 and concatenate in order."""
    items = np.asarray(items)
    if items.shape[0] == 0:
        return func(items)
    parts: Sequence[np.ndarray] = map_ordered(
        lambda start, stop: func(items[start:stop]), items.shape[0], chunk_size, workers
    )
    return np.concatenate(parts, axis=0)


__all__ = ["THREADS_ENV", "worker_count", "chunk_bounds", "map_ordered", "map_array"]
