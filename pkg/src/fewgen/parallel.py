"""
Order-preserving batch execution on worker threads.

`apply_parallel` applies a function to every item. With one worker it runs inline; with more,
a queue feeds worker threads (one `None` sentinel per worker) and results are gathered under a
lock keyed by input position, so the returned list is always in input order.
"""

from __future__ import annotations

import logging
import os
import queue
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Generic, Sequence, TypeVar

from .errors import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "GSHOT_THREADS"


@dataclass
class BatchResult(Generic[R]):
    """
    Outcome of a batch run.

    Properties:
        values: Result per input position (None where the call failed).
        errors: Mapping of input position to the exception it raised.
        total_time: Wall-clock seconds for the whole batch.
        status: True if every call succeeded.
    """

    values: list[R | None]
    errors: dict[int, Exception] = field(default_factory=dict)
    total_time: float = 0.0

    @property
    def status(self) -> bool:
        """True if every call succeeded."""
        return not self.errors

    def raise_first(self) -> None:
        """Re-raise the error of the lowest failing position, if any."""
        if self.errors:
            raise self.errors[min(self.errors)]


def resolve_workers(threads: int | None = None) -> int:
    """Worker count from an explicit value, else GSHOT_THREADS, else 1."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            threads = int(raw)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if threads < 1:
        raise ConfigError(f"Thread count must be >= 1, got {threads}")
    return threads


def run_batch(
    items: Sequence[T],
    func: Callable[[T], R],
    workers: int = 1,
) -> BatchResult[R]:
    """Apply `func` to every item, collecting results and errors by position."""
    result: BatchResult[R] = BatchResult(values=[None] * len(items))
    start_total = time.perf_counter()

    if workers == 1 or len(items) < 2:
        for index, item in enumerate(items):
            try:
                result.values[index] = func(item)
            except Exception as exc:  # noqa: BLE001 - collected and re-raised by callers
                result.errors[index] = exc
                break
        result.total_time = time.perf_counter() - start_total
        return result

    work: queue.Queue[int | None] = queue.Queue()
    for index in range(len(items)):
        work.put(index)
    for _ in range(workers):
        work.put(None)

    lock = threading.Lock()

    def worker() -> None:
        while True:
            index = work.get()
            if index is None:
                break
            try:
                value = func(items[index])
                with lock:
                    result.values[index] = value
            except Exception as exc:  # noqa: BLE001
                with lock:
                    result.errors[index] = exc

    threads = [threading.Thread(target=worker) for _ in range(min(workers, len(items)))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    result.total_time = time.perf_counter() - start_total
    logger.debug(
        "Ran %d items on %d threads in %.3fs", len(items), len(threads), result.total_time
    )
    return result


def apply_parallel(
    items: Sequence[T],
    func: Callable[[T], R],
    workers: int = 1,
) -> list[R]:
    """Results of `func` over `items`, in order; the first failure is re-raised."""
    result = run_batch(items, func, workers)
    result.raise_first()
    return result.values  # type: ignore[return-value]
