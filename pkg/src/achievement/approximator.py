"""Outer covers, truncation oracles and interior certificates for E(x).

E(x) is the attractor of E = Sigma + q E.  Iterating d times from the
interval [0, K/(1-q)] gives the depth-d cover

    cover(d) = union over p in S_d of [p, p + K q^d / (1-q)],
    S_d = { sum_{j<d} s_j q^j : s_j in Sigma },

which contains E, shrinks with d, and whose left endpoints all lie in E.
Covers are built over integers: with q = a/b every point of S_d times
b^d (b-a) is an integer and so is the radius, so dedup, sort and merge are
exact integer operations (numpy int64 when it fits, Python ints otherwise).
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Optional, Sequence

import numpy as np

from .classifier import theorem7_kappa
from .config import Budgets
from .errors import BudgetExceeded, CapExceeded, DigitGapFailure
from .model import MultigeometricSeq, best_run, sigma_set, term

DEFAULTS = Budgets()

_INT64_SAFE = 1 << 62


class _Merged:
    """Shared queries over merged closed components stored as scaled ints."""

    scale: int

    @property
    def component_count(self) -> int:
        return len(self._bounds[0])

    @cached_property
    def components(self) -> tuple[tuple[Fraction, Fraction], ...]:
        L = self.scale
        s, e = self._bounds
        return tuple((Fraction(a, L), Fraction(b, L)) for a, b in zip(s, e))

    @cached_property
    def total_length(self) -> Fraction:
        s, e = self._bounds
        return Fraction(sum(e) - sum(s), self.scale)

    def contains(self, t) -> bool:
        return self.contains_interval(t, t)

    def contains_interval(self, lo, hi) -> bool:
        """True iff [lo, hi] lies inside a single component."""
        lo, hi = Fraction(lo), Fraction(hi)
        s, e = self._bounds
        i = bisect_right(s, floor(lo * self.scale)) - 1
        return i >= 0 and ceil(hi * self.scale) <= e[i]


@dataclass(frozen=True, eq=False)
class DepthCover(_Merged):
    depth: int
    scale: int  # common denominator L = b^d (b - a)
    scaled_points: np.ndarray  # sorted distinct integers, points * L
    scaled_radius: int  # tail radius * L

    @property
    def tail_radius(self) -> Fraction:
        return Fraction(self.scaled_radius, self.scale)

    @cached_property
    def points(self) -> tuple[Fraction, ...]:
        L = self.scale
        return tuple(Fraction(int(p), L) for p in self.scaled_points)

    @cached_property
    def _bounds(self) -> tuple[list[int], list[int]]:
        p = self.scaled_points
        R = self.scaled_radius
        if len(p) == 0:
            return [], []
        if p.dtype == object:
            pl = p.tolist()
            starts, ends = [pl[0]], []
            for prev, cur in zip(pl, pl[1:]):
                if cur > prev + R:
                    ends.append(prev + R)
                    starts.append(cur)
            ends.append(pl[-1] + R)
            return starts, ends
        breaks = np.nonzero(p[1:] > p[:-1] + R)[0]
        starts = np.concatenate((p[:1], p[breaks + 1]))
        ends = np.concatenate((p[breaks], p[-1:])) + R
        return starts.tolist(), ends.tolist()


@dataclass(frozen=True, eq=False)
class ComponentCover(_Merged):
    """The depth-d cover kept only as merged components.

    Same set as depth_cover(x, d), built as Sigma + q * cover(d-1) on the
    merged intervals, so the work tracks the component count instead of
    the number of distinct points.
    """

    depth: int
    scale: int
    scaled_starts: tuple[int, ...]
    scaled_ends: tuple[int, ...]

    @property
    def _bounds(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.scaled_starts, self.scaled_ends


def depth_cover(x: MultigeometricSeq, d: int, budget: Optional[int] = None) -> DepthCover:
    """Guaranteed outer cover of E(x) at block depth d.

    Raises BudgetExceeded naming the first depth whose candidate point count
    (card(Sigma) times the previous level's distinct points) passes budget.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    budget = DEFAULTS.points if budget is None else budget
    a, b = x.q.numerator, x.q.denominator
    sig = sigma_set(x).sums
    big = x.K * b ** (d + 1) * 2 >= _INT64_SAFE
    dtype = object if big else np.int64

    level = np.zeros(1, dtype=dtype)  # S_j * b^j
    for j in range(d):
        estimate = len(sig) * len(level)
        if estimate > budget:
            raise BudgetExceeded(j + 1, estimate, budget)
        shift = b ** (j + 1)
        sig_scaled = np.array([s * shift for s in sig], dtype=dtype)
        level = np.unique(np.add.outer(sig_scaled, a * level).ravel())
    L = b**d * (b - a)
    return DepthCover(d, L, level * (b - a), x.K * a**d * b)


def _merge_sorted(starts, ends):
    out_s, out_e = [starts[0]], [ends[0]]
    for a, e in zip(starts[1:], ends[1:]):
        if a <= out_e[-1]:
            if e > out_e[-1]:
                out_e[-1] = e
        else:
            out_s.append(a)
            out_e.append(e)
    return out_s, out_e


def component_cover(x: MultigeometricSeq, d: int, budget: Optional[int] = None) -> ComponentCover:
    """Merged components of the depth-d cover, without enumerating points.

    The budget bounds card(Sigma) times the previous component count.
    """
    if d < 0:
        raise ValueError("depth must be non-negative")
    budget = DEFAULTS.points if budget is None else budget
    a, b = x.q.numerator, x.q.denominator
    sig = sigma_set(x).sums
    big = x.K * b ** (d + 1) * 2 >= _INT64_SAFE
    starts, ends = [0], [x.K * b]  # scaled by b^j (b - a)
    for j in range(d):
        estimate = len(sig) * len(starts)
        if estimate > budget:
            raise BudgetExceeded(j + 1, estimate, budget)
        L = b ** (j + 1) * (b - a)
        if big:
            pieces = sorted((s * L + a * lo, s * L + a * hi) for s in sig for lo, hi in zip(starts, ends))
            starts, ends = _merge_sorted([p[0] for p in pieces], [p[1] for p in pieces])
            continue
        sig_scaled = np.array([s * L for s in sig], dtype=np.int64)
        lo = np.add.outer(sig_scaled, a * np.array(starts, dtype=np.int64)).ravel()
        hi = np.add.outer(sig_scaled, a * np.array(ends, dtype=np.int64)).ravel()
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]
        reach = np.maximum.accumulate(hi)
        breaks = np.nonzero(lo[1:] > reach[:-1])[0]
        starts = np.concatenate((lo[:1], lo[breaks + 1])).tolist()
        ends = np.concatenate((reach[breaks], reach[-1:])).tolist()
    return ComponentCover(d, b**d * (b - a), tuple(starts), tuple(ends))


def component_stats(c: DepthCover) -> tuple[int, list[Fraction], Fraction]:
    return c.component_count, [hi - lo for lo, hi in c.components], c.total_length


def cover_nested(inner: _Merged, outer: _Merged) -> bool:
    """Every component of ``inner`` sits inside one component of ``outer``."""
    return all(outer.contains_interval(lo, hi) for lo, hi in inner.components)


@dataclass(frozen=True, eq=False)
class OracleSet:
    n_terms: int
    scale: int
    scaled_sums: tuple[int, ...]

    @cached_property
    def sums(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(s, self.scale) for s in self.scaled_sums)

    @cached_property
    def gaps(self) -> tuple[tuple[Fraction, Fraction], ...]:
        s = self.sums
        return tuple(zip(s, s[1:]))

    def largest_gap(self) -> Optional[tuple[Fraction, Fraction]]:
        """Widest gap, leftmost on ties."""
        s = self.scaled_sums
        if len(s) < 2:
            return None
        i = max(range(len(s) - 1), key=lambda i: (s[i + 1] - s[i], -i))
        return Fraction(s[i], self.scale), Fraction(s[i + 1], self.scale)


def oracle_subsums(x: MultigeometricSeq, n: int, allow_large: bool = False) -> OracleSet:
    """All distinct subsums of the first n terms, by direct enumeration."""
    if n < 1:
        raise ValueError("need at least one term")
    if n > DEFAULTS.oracle_hard_cap:
        raise CapExceeded(f"N = {n} exceeds the hard cap {DEFAULTS.oracle_hard_cap}")
    if n > DEFAULTS.oracle_soft_cap and not allow_large:
        raise CapExceeded(f"N = {n} exceeds {DEFAULTS.oracle_soft_cap}; pass allow_large")
    L = x.q.denominator ** ((n - 1) // x.m)
    sums = {0}
    for i in range(1, n + 1):
        t = term(x, i) * L
        assert t.denominator == 1
        t = int(t)
        sums |= {s + t for s in sums}
    return OracleSet(n, L, tuple(sorted(sums)))


@dataclass(frozen=True)
class IntervalCertificate:
    lo: Fraction
    hi: Fraction
    method: str  # THEOREM_2_CONSTRUCTION or THEOREM_7_DIGITS
    witness_depth: int
    points_checked: int = 0


THEOREM_2_CONSTRUCTION = "THEOREM_2_CONSTRUCTION"
THEOREM_7_DIGITS = "THEOREM_7_DIGITS"


def certificate_theorem2(x: MultigeometricSeq) -> Optional[IntervalCertificate]:
    """[n0/(1-q), (n0+n)/(1-q)] inside E, when q >= 1/(n+1).

    Every point of that interval is n0 sum q^j plus a subsum of the
    n-fold repeated geometric series, whose terms never exceed their tails;
    per block the digit n0 + p_j (0 <= p_j <= n) is a block sum.
    """
    run = best_run(sigma_set(x))
    if run.n < 1 or x.q < Fraction(1, run.n + 1):
        return None
    one_minus_q = 1 - x.q
    return IntervalCertificate(
        Fraction(run.n0) / one_minus_q,
        Fraction(run.last) / one_minus_q,
        THEOREM_2_CONSTRUCTION,
        witness_depth=0,
    )


def self_covering(x: MultigeometricSeq, lo, hi) -> bool:
    """True iff [lo, hi] is contained in the union of s + q[lo, hi], s in Sigma.

    A closed set J with J within Sigma + qJ lies inside the attractor E,
    so this is an independent check of any interval certificate.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    q = x.q
    pieces = sorted((s + q * lo, s + q * hi) for s in sigma_set(x))
    reach = lo
    for a, b in pieces:
        if a > reach:
            break
        reach = max(reach, b)
        if reach >= hi:
            return True
    return reach >= hi


@dataclass(frozen=True)
class DigitRepresentation:
    """target = sum over levels i of (3 a_i + 2 c_i) / B^i, plus an optional
    cycle of levels repeated forever after the prefix."""

    kappa: int
    target: Fraction
    prefix: tuple[tuple[int, int], ...]  # (a_i, c_i)
    cycle: tuple[tuple[int, int], ...] = ()

    def value(self) -> Fraction:
        q = Fraction(1, 2 * self.kappa + 2)
        total = sum((3 * a + 2 * c) * q**i for i, (a, c) in enumerate(self.prefix))
        if self.cycle:
            n = len(self.prefix)
            period = sum((3 * a + 2 * c) * q**i for i, (a, c) in enumerate(self.cycle))
            total += q**n * period / (1 - q ** len(self.cycle))
        return Fraction(total)

    def valid(self) -> bool:
        levels = self.prefix + self.cycle
        return all(a in (0, 1) and 0 <= c <= self.kappa for a, c in levels) and self.value() == self.target


def _split_digit(v: int, kappa: int, point) -> tuple[int, int]:
    a = v % 2  # odd digits need the 3
    c = (v - 3 * a) // 2
    if c < 0 or c > kappa:
        raise DigitGapFailure(point, f"level digit {v} is not 3a + 2c with c <= {kappa}")
    return a, c


def _digit_levels(j: int, n: int, kappa: int) -> list[int]:
    """Level digits for 3 + j/B^n (0 <= j < B^n), by induction on n."""
    B = 2 * kappa + 2
    if n == 0:
        return [3]
    eps, rest = j % B, j // B
    if eps != 1:
        return _digit_levels(rest, n - 1, kappa) + [eps]
    # eps = 1:  t = (t' - 1/B^(n-1)) + (3 + 2 kappa)/B^n
    if rest > 0:
        return _digit_levels(rest - 1, n - 1, kappa) + [B + 1]
    # t' = 3:  3 + 1/B^n = 2 + (1 - 1/B^(n-1)) + (3 + 2 kappa)/B^n
    return [2] + [B - 1] * (n - 1) + [B + 1]


def theorem7_representation(kappa: int, j: int, depth: int) -> DigitRepresentation:
    """Explicit selection for the grid point 3 + j/(2 kappa + 2)^depth."""
    B = 2 * kappa + 2
    target = 3 + Fraction(j, B**depth)
    if j == B**depth:
        # 4 = 3 + sum_{i>=1} (B-1)/B^i, with B-1 = 3 + 2(kappa-1)
        rep = DigitRepresentation(kappa, target, ((1, 0),), ((1, kappa - 1),))
    else:
        levels = _digit_levels(j, depth, kappa)
        rep = DigitRepresentation(kappa, target, tuple(_split_digit(v, kappa, target) for v in levels))
    return rep


def certificate_theorem7(kappa: int, depth: int, budget: Optional[int] = None) -> IntervalCertificate:
    """Certify [3, 4] inside E(3, 2 x kappa; 1/(2 kappa + 2)) on the step B^-depth grid."""
    if kappa < 1 or depth < 1:
        raise ValueError("need kappa >= 1 and depth >= 1")
    budget = DEFAULTS.points if budget is None else budget
    B = 2 * kappa + 2
    count = B**depth + 1
    if count > budget:
        raise BudgetExceeded(depth, count, budget)
    for j in range(count):
        rep = theorem7_representation(kappa, j, depth)
        if not rep.valid():
            raise DigitGapFailure(rep.target, f"representation sums to {rep.value()}")
    return IntervalCertificate(Fraction(3), Fraction(4), THEOREM_7_DIGITS, depth, count)


def default_certificates(x: MultigeometricSeq) -> list[IntervalCertificate]:
    certs = []
    c2 = certificate_theorem2(x)
    if c2 is not None:
        certs.append(c2)
    # scaled copies of the pattern are not certified here: [3,4] is specific
    # to the unreduced block (3, 2, ..., 2)
    kappa = theorem7_kappa(x.k)
    if kappa is not None and x.k[0] == 3 and x.q == Fraction(1, 2 * kappa + 2):
        certs.append(IntervalCertificate(Fraction(3), Fraction(4), THEOREM_7_DIGITS, 0))
    return certs


class Membership(str, enum.Enum):
    IN = "In"
    OUT = "Out"
    UNDETERMINED = "Undetermined"


def membership_test(
    x: MultigeometricSeq,
    t,
    d: int,
    certified: Optional[Sequence[IntervalCertificate]] = None,
    frontier_cap: int = 200_000,
) -> Membership:
    """Three-valued membership of t in E(x), searching d block levels.

    At level j the residuals are r = (t - p)/q^j for p in S_j with r inside
    [0, K/(1-q)].  In: some residual is 0 or lies in a certified interval.
    Out: no residual survives, i.e. t is outside cover(j).
    """
    t = Fraction(t)
    if certified is None:
        certified = default_certificates(x)
    spans = [(c.lo, c.hi) for c in certified]
    q, T = x.q, x.total
    sig = sigma_set(x).sums
    level = {t} if 0 <= t <= T else set()
    for j in range(d + 1):
        if not level:
            return Membership.OUT
        for r in level:
            if r == 0 or any(lo <= r <= hi for lo, hi in spans):
                return Membership.IN
        if j == d:
            break
        nxt = set()
        for r in level:
            for s in sig:
                if s > r:
                    break
                u = (r - s) / q
                if u <= T:
                    nxt.add(u)
        if len(nxt) > frontier_cap:
            return Membership.UNDETERMINED
        level = nxt
    return Membership.UNDETERMINED
