"""Decimal digit frequencies across all primes below 10**n."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

SEGMENT = 1 << 22
MAX_EXPONENT = 9


def _base_primes(limit: int) -> np.ndarray:
    """Primes <= limit with a plain sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def prime_segments(limit: int, segment: int = SEGMENT) -> Iterator[np.ndarray]:
    """Yield ascending int64 arrays that together hold every prime < limit once.

    Odd-only segmented sieve; memory stays O(segment + sqrt(limit)).
    """
    if limit <= 2:
        return
    yield np.array([2], dtype=np.int64)
    base = _base_primes(math.isqrt(limit - 1))[1:]
    low = 3
    while low < limit:
        high = min(low + 2 * segment, limit)
        count = (high - low + 1) // 2  # odd numbers low, low+2, ... < high
        mask = np.ones(count, dtype=bool)
        for p in base:
            p = int(p)
            sq = p * p
            if sq >= high:
                break
            start = max(sq, -(-low // p) * p)
            if start % 2 == 0:
                start += p
            mask[(start - low) // 2 :: p] = False
        primes = low + 2 * np.flatnonzero(mask).astype(np.int64)
        if primes.size:
            yield primes
        low = high if high % 2 else high + 1


def primes_below(limit: int) -> Iterator[int]:
    if limit < 2:
        raise ValueError("limit must be at least 2")
    for chunk in prime_segments(limit):
        yield from chunk.tolist()


def tally_digits(values: np.ndarray) -> np.ndarray:
    """Occurrences of each decimal digit over all positions of positive integers."""
    counts = np.zeros(10, dtype=np.int64)
    x = values.astype(np.int64, copy=True)
    while x.size:
        counts += np.bincount(x % 10, minlength=10)
        x //= 10
        x = x[x > 0]
    return counts


@dataclass(frozen=True)
class DigitTable:
    n: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def probabilities(self) -> tuple[float, ...]:
        total = self.total
        return tuple(c / total for c in self.counts)

    def max_deviation(self) -> float:
        return max(abs(p - 0.1) for p in self.probabilities)


def _check_exponent(n: int) -> None:
    if not 1 <= n <= MAX_EXPONENT:
        raise ValueError(f"exponent must lie in [1, {MAX_EXPONENT}], got {n}")


def digit_tables(n_max: int, allow_beyond: bool = False) -> list[DigitTable]:
    """Tables for n = 1..n_max from a single sieve pass up to 10**n_max."""
    if not allow_beyond:
        _check_exponent(n_max)
    per_decade = np.zeros((n_max, 10), dtype=np.int64)
    for chunk in prime_segments(10**n_max):
        # Split the chunk at powers of ten so each prime is credited to its length.
        edges = np.searchsorted(chunk, [10**k for k in range(1, n_max)])
        for k, part in enumerate(np.split(chunk, edges)):
            if part.size:
                per_decade[k] += tally_digits(part)
    cumulative = np.cumsum(per_decade, axis=0)
    return [DigitTable(n=k + 1, counts=tuple(int(c) for c in cumulative[k]))
            for k in range(n_max)]


def digit_table(n: int) -> DigitTable:
    _check_exponent(n)
    return digit_tables(n)[-1]


def convergence_report(n_max: int, allow_beyond: bool = False) -> list[tuple[int, int, float, float]]:
    """Rows (n, digit, P_n(digit), |P_n(digit) - 0.1|) for n = 1..n_max."""
    rows = []
    for table in digit_tables(n_max, allow_beyond=allow_beyond):
        for digit, p in enumerate(table.probabilities):
            rows.append((table.n, digit, p, abs(p - 0.1)))
    return rows


def write_convergence_csv(rows, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "digit", "probability", "deviation"])
        for n, digit, p, dev in rows:
            writer.writerow([n, digit, f"{p:.10f}", f"{dev:.10f}"])
