"""Partition q in (0, 1/2) into regions of constant verdict for a fixed block."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .classifier import Rule, Verdict, classify, theorem7_kappa, theorem7_point, thresholds
from .model import HALF, canonicalize

# threshold names shown on the number line, in tie order
_LABELS = {
    "theorem3_bound": "1/card(Sigma)",
    "kakeya_II_bound": "Kakeya II",
    "window_lo": "1/(n+1)",
    "window_hi_naive": "k_m/(K+k_m)",
    "kakeya_I_threshold": "D/(K+D)",
    "monotone_bound": "k_m/k_1",
}


@dataclass(frozen=True)
class CriticalPoint:
    q: Fraction
    labels: tuple[str, ...]


@dataclass(frozen=True)
class Region:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool
    verdict: Verdict
    rule: Optional[Rule]

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, q) -> bool:
        lo_ok = self.lo < q or (self.lo_closed and q == self.lo)
        hi_ok = q < self.hi or (self.hi_closed and q == self.hi)
        return lo_ok and hi_ok

    def notation(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class ScanReport:
    k: tuple[int, ...]
    critical_points: tuple[CriticalPoint, ...]
    regions: tuple[Region, ...]
    samples: tuple[tuple[Fraction, Verdict], ...]


def critical_points(k: Sequence[int]) -> list[CriticalPoint]:
    probe = canonicalize(k, Fraction(1, 4))
    th = thresholds(probe)
    named = th.named()
    labels: dict[Fraction, list[str]] = {}
    for name, label in _LABELS.items():
        v = named.get(name)
        if v is not None and 0 < v < HALF:
            labels.setdefault(v, []).append(label)
    p = theorem7_point(probe.k)
    kappa = theorem7_kappa(probe.k)
    if p is not None:
        labels.setdefault(p, []).append("THEOREM_7")
        family = {
            Fraction(1, 2 * kappa + 2): "1/(2k+2)",
            Fraction(1, 2 * kappa): "1/(2k)",
            Fraction(2, 2 * kappa + 5): "2/(2k+5)",
        }
        for v, label in family.items():
            if 0 < v < HALF:
                labels.setdefault(v, []).append(label)
    return [CriticalPoint(v, tuple(dict.fromkeys(labels[v]))) for v in sorted(labels)]


def _verdict_at(k, q) -> tuple[Verdict, Optional[Rule]]:
    c = classify(canonicalize(k, q))
    return c.verdict, (c.provenance[0].rule_id if c.provenance else None)


def scan(k: Sequence[int], resolution: int = 0) -> ScanReport:
    """Classify every open gap between critical points at its midpoint and
    every critical point itself, then merge neighbours with the same
    verdict and deciding rule.  ``resolution`` adds that many evenly spaced
    extra samples."""
    k = canonicalize(k, Fraction(1, 4)).k
    crit = critical_points(k)
    cuts = [Fraction(0)] + [c.q for c in crit] + [HALF]

    pieces = []
    for i, (lo, hi) in enumerate(zip(cuts, cuts[1:])):
        if i > 0:
            pieces.append((lo, lo, True, True))
        pieces.append((lo, hi, False, False))

    regions: list[Region] = []
    samples = []
    for lo, hi, lc, hc in pieces:
        q = lo if lo == hi else (lo + hi) / 2
        verdict, rule = _verdict_at(k, q)
        samples.append((q, verdict))
        if regions and regions[-1].verdict is verdict and regions[-1].rule is rule:
            prev = regions[-1]
            regions[-1] = Region(prev.lo, hi, prev.lo_closed, hc, verdict, rule)
        else:
            regions.append(Region(lo, hi, lc, hc, verdict, rule))

    for i in range(1, resolution + 1):
        q = Fraction(i, 2 * (resolution + 1))
        samples.append((q, _verdict_at(k, q)[0]))
    samples.sort(key=lambda s: s[0])
    deduped = []
    for s in samples:
        if not deduped or deduped[-1][0] != s[0]:
            deduped.append(s)
    return ScanReport(tuple(k), tuple(crit), tuple(regions), tuple(deduped))


def region_of(report: ScanReport, q) -> Region:
    q = Fraction(q)
    for r in report.regions:
        if q in r:
            return r
    raise ValueError(f"q = {q} is outside (0, 1/2)")


def family_block(kappa: int) -> tuple[int, ...]:
    """(3, 2, ..., 2) with kappa twos."""
    return (3,) + (2,) * kappa

