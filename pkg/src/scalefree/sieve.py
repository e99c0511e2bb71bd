"""Exact prime counting with an odd-only segmented sieve of Eratosthenes."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = ["PiTable", "sieve_pi", "simple_sieve_pi", "base_primes", "MAX_LIMIT"]

MAX_LIMIT = 10**9
SEGMENT_ODDS = 1 << 20


@dataclass(frozen=True)
class PiTable:
    """Exact ``pi(x)`` at sorted checkpoints; the last checkpoint is ``limit``."""

    limit: int
    checkpoints: tuple[tuple[int, int], ...]

    def __post_init__(self):
        xs = [x for x, _ in self.checkpoints]
        if xs != sorted(xs):
            raise ValueError("checkpoints must be sorted")

    def pi(self, x: int) -> int:
        x = int(x)
        lo, hi = 0, len(self.checkpoints)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.checkpoints[mid][0] < x:
                lo = mid + 1
            else:
                hi = mid
        if lo == len(self.checkpoints) or self.checkpoints[lo][0] != x:
            raise KeyError(f"pi({x}) not tabulated")
        return self.checkpoints[lo][1]

    def __contains__(self, x) -> bool:
        try:
            self.pi(x)
        except KeyError:
            return False
        return True

    @property
    def xs(self) -> list[int]:
        return [x for x, _ in self.checkpoints]

    @property
    def pis(self) -> list[int]:
        return [c for _, c in self.checkpoints]


def base_primes(n: int) -> np.ndarray:
    """All primes ``<= n`` from a plain bitset sieve."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(n + 1, dtype=bool)
    mark[:2] = False
    mark[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if mark[p]:
            mark[p * p::2 * p] = False
    return np.flatnonzero(mark).astype(np.int64)


def _count_segment(lo: int, hi: int, odd_primes: np.ndarray, cuts: Sequence[int]) -> list[int]:
    """Count odd primes in ``[lo, hi)`` (``lo`` odd) at each cut ``c`` (primes ``< c``)."""
    n = (hi - lo + 1) // 2
    mask = np.ones(n, dtype=bool)
    for p in odd_primes:
        p = int(p)
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, -(-lo // p) * p)
        if start % 2 == 0:
            start += p
        if start < hi:
            mask[(start - lo) // 2::p] = False
    if lo == 1:
        mask[0] = False
    full = int(np.count_nonzero(mask))
    out = []
    for c in cuts:
        k = (c - lo + 1) // 2
        if k <= 0:
            out.append(0)
        elif k >= n:
            out.append(full)
        else:
            out.append(int(np.count_nonzero(mask[:k])))
    return out


def sieve_pi(limit: int, checkpoints: Iterable[int] = (), threads: int | None = None,
             segment_odds: int = SEGMENT_ODDS) -> PiTable:
    """Exact ``pi(x)`` for ``x`` in ``checkpoints`` and ``x = limit``.

    Segments are independent and may run on ``threads`` workers; counts are
    merged in segment order so the result does not depend on the worker count.
    """
    limit = int(limit)
    if not 2 <= limit <= MAX_LIMIT:
        raise ValueError(f"limit must lie in [2, {MAX_LIMIT}], got {limit}")
    xs = sorted({int(x) for x in checkpoints} | {limit})
    if xs[0] < 0 or xs[-1] > limit:
        raise ValueError("checkpoints must lie in [0, limit]")
    if threads is None:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise ValueError("threads must be >= 1")

    odd_primes = base_primes(math.isqrt(limit))[1:]
    span = 2 * segment_odds
    segments = [(lo, min(lo + span, limit + 1)) for lo in range(1, limit + 1, span)]

    def work(seg):
        lo, hi = seg
        return _count_segment(lo, hi, odd_primes, [x + 1 for x in xs])

    if threads == 1 or len(segments) == 1:
        per_segment = [work(s) for s in segments]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_segment = list(pool.map(work, segments))

    totals = [0] * len(xs)
    for counts in per_segment:
        for i, c in enumerate(counts):
            totals[i] += c
    table = []
    for x, odd in zip(xs, totals):
        table.append((x, odd + (1 if x >= 2 else 0)))
    return PiTable(limit, tuple(table))


def simple_sieve_pi(limit: int, checkpoints: Iterable[int] = ()) -> PiTable:
    """Unsegmented odd-only bitset sieve with a cumulative count.

    Kept deliberately separate from :func:`sieve_pi` so the two can
    cross-check each other.
    """
    limit = int(limit)
    if not 2 <= limit <= MAX_LIMIT:
        raise ValueError(f"limit must lie in [2, {MAX_LIMIT}], got {limit}")
    # index i <-> odd number 2i+1
    odd = np.ones(limit // 2 + 1, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2::p] = False
    cum = np.cumsum(odd, dtype=np.int64)
    xs = sorted({int(x) for x in checkpoints} | {limit})
    table = []
    for x in xs:
        if x < 2:
            table.append((x, 0))
        else:
            table.append((x, int(cum[(x - 1) // 2]) + 1))
    return PiTable(limit, tuple(table))
