"""Order-preserving parallel map over joblib, capped by UIRISK_THREADS."""

from typing import Any, Callable, Iterable, TypeVar

from joblib import Parallel, delayed

from uirisk.config import settings

T = TypeVar("T")


def parallel_map(func: Callable[..., T], items: Iterable[Any], n_jobs: int | None = None) -> list[T]:
    """Apply func to each item; results come back in input order."""
    jobs = min(n_jobs or settings.runtime.threads, settings.runtime.threads)
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    return Parallel(n_jobs=jobs, prefer="threads")(delayed(func)(item) for item in items)
