"""Per-criterion outcomes, filled by the acceptance tests and printed by conftest."""

from __future__ import annotations

import time
from contextlib import contextmanager

RESULTS: dict[int, tuple[str, str, float, float]] = {}


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time the block; record PASS only if it finishes without error inside ``limit_s``."""
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit_s, f"criterion {number} took {elapsed:.1f} s, limit {limit_s:.0f} s"
        status = "PASS"
    finally:
        RESULTS[number] = (status, title, time.perf_counter() - start, limit_s)


def summary_lines() -> list[str]:
    return [
        f"criterion {n:>2}: {status}  {title} ({elapsed:.2f} s, limit {limit:.0f} s)"
        for n, (status, title, elapsed, limit) in sorted(RESULTS.items())
    ]
