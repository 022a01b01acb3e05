"""Multigeometric sequences (k_1, ..., k_m; q) and their block combinatorics.

The sequence repeats the integer block k_1 >= ... >= k_m scaled by
successive powers of q::

    k_1, ..., k_m, k_1 q, ..., k_m q, k_1 q^2, ...

All arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable

from .errors import NonPositiveTerm, NoPositiveRun, RatioOutOfRange

Ratio = Fraction

HALF = Fraction(1, 2)


def as_ratio(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class MultigeometricSeq:
    k: tuple[int, ...]
    q: Fraction

    def __post_init__(self):
        if not self.k:
            raise NonPositiveTerm("block must be non-empty")
        for v in self.k:
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise NonPositiveTerm(f"block entry {v!r} is not a positive integer")
        if any(a < b for a, b in zip(self.k, self.k[1:])):
            raise ValueError(f"block {self.k} is not in descending order; use canonicalize")
        if not 0 < self.q < HALF:
            raise RatioOutOfRange(f"q = {self.q} is outside (0, 1/2)")

    @property
    def m(self) -> int:
        return len(self.k)

    @property
    def K(self) -> int:
        return sum(self.k)

    @property
    def total(self) -> Fraction:
        """Sum of the whole series, K / (1 - q)."""
        return self.K / (1 - self.q)

    def __str__(self):
        return f"({','.join(map(str, self.k))};{self.q})"


def canonicalize(raw_k: Iterable[int], q) -> MultigeometricSeq:
    """Sort the block descending (duplicates kept) and validate q in (0, 1/2)."""
    k = list(raw_k)
    if not k:
        raise NonPositiveTerm("block must be non-empty")
    for v in k:
        if int(v) != v or v <= 0:
            raise NonPositiveTerm(f"block entry {v!r} is not a positive integer")
    return MultigeometricSeq(tuple(sorted((int(v) for v in k), reverse=True)), as_ratio(q))


def term(x: MultigeometricSeq, i: int) -> Fraction:
    """The i-th term (1-based)."""
    if i < 1:
        raise ValueError("terms are indexed from 1")
    block, pos = divmod(i - 1, x.m)
    return x.k[pos] * x.q**block


def tail_sum(x: MultigeometricSeq, i: int) -> Fraction:
    """Sum of all terms after the i-th one, in closed form."""
    if i < 0:
        raise ValueError("i must be non-negative")
    block, pos = divmod(i, x.m)
    q = x.q
    return sum(x.k[pos:]) * q**block + x.K * q ** (block + 1) / (1 - q)


def is_monotone(x: MultigeometricSeq) -> bool:
    """True iff the listed terms are non-increasing, i.e. k_m q^j >= k_1 q^(j+1)."""
    return x.q <= Fraction(x.k[-1], x.k[0])


@dataclass(frozen=True)
class SigmaSet:
    """Distinct subset sums of one block; always contains 0 and K."""

    sums: tuple[int, ...]
    block_total: int

    def __len__(self):
        return len(self.sums)

    def __contains__(self, s):
        return s in self._members

    def __iter__(self):
        return iter(self.sums)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.sums)


@dataclass(frozen=True)
class Run:
    """Consecutive integers n0, n0+1, ..., n0+n all achievable as block sums."""

    n0: int
    n: int

    @property
    def last(self) -> int:
        return self.n0 + self.n


def subset_sums(k: Iterable[int]) -> SigmaSet:
    """Achievable subset sums via a bitset DP; bit s of ``reach`` marks sum s."""
    k = list(k)
    reach = 1
    for v in k:
        reach |= reach << v
    total = sum(k)
    sums = tuple(s for s in range(total + 1) if reach >> s & 1)
    return SigmaSet(sums, total)


def sigma_set(x: MultigeometricSeq) -> SigmaSet:
    return subset_sums(x.k)


def all_runs(s: SigmaSet) -> list[Run]:
    """Maximal runs of consecutive sums, restricted to n0 >= 1.

    A run that would start at 0 is clipped to start at 1.
    """
    runs = []
    positive = [v for v in s.sums if v >= 1]
    if not positive:
        return runs
    start = prev = positive[0]
    for v in positive[1:]:
        if v != prev + 1:
            runs.append(Run(start, prev - start))
            start = v
        prev = v
    runs.append(Run(start, prev - start))
    return runs


def best_run(s: SigmaSet) -> Run:
    """Longest run; ties go to the smallest n0."""
    runs = all_runs(s)
    if not runs:
        raise NoPositiveRun(f"sigma set {s.sums} has no positive element")
    return max(runs, key=lambda r: (r.n, -r.n0))


def block_gcd(k: Iterable[int]) -> int:
    g = 0
    for v in k:
        g = gcd(g, v)
    return g
