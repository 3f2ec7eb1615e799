"""Deterministic operation counters used by the cost-shape checks.

Counting is always on; the overhead is a dict increment per call site.
"""
from __future__ import annotations

from collections import Counter
from contextlib import contextmanager

_counts: Counter = Counter()


def add(kind: str, n: int = 1) -> None:
    _counts[kind] += n


def snapshot() -> Counter:
    return Counter(_counts)


@contextmanager
def counting():
    """Yield a Counter that holds the ops performed inside the block."""
    before = snapshot()
    delta: Counter = Counter()
    try:
        yield delta
    finally:
        now = snapshot()
        for k in now:
            d = now[k] - before.get(k, 0)
            if d:
                delta[k] = d
