"""Rule engine: I / C / MC / Unknown for E(k_1, ..., k_m; q).

Every rule is a sufficient condition expressed as exact rational
inequalities in q:

    (a) KAKEYA_I          q >= D/(K+D)                       -> I
    (b) THEOREM_3         q <  1/card(Sigma)                 -> C
    (c) KAKEYA_II         q <  d_min/(K+d_min), d_min > 0    -> C
    (d) CANTORVAL_WINDOW  1/(n+1) <= q < D/(K+D), q <= k_m/k_1 -> MC
    (e) THEOREM_7         block (3, 2 x kappa), q = 1/(2 kappa + 2) -> MC

with D = max_i (k_i - sum_{l>i} k_l) and d_min the corresponding minimum.
Each term k_i q^j is bounded by its tail exactly when q >= D_i/(K+D_i), so
(a) is the everywhere-form of the classical tail criterion and, under
monotone listing, its failure at one block position for every block rules
out a finite union of intervals.  Rule (d) pairs that with the interior
given by a run n0..n0+n of consecutive block sums.

All applicable rules are recorded; the verdict comes from the first one.
When nothing applies the classifier tries to re-block the term multiset by
exponent shifts (``shift_normalize``) before answering Unknown.
"""

from __future__ import annotations

import enum
import itertools
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    InputError,
    InternalInconsistency,
    NonIntegralScale,
    NonPositiveTerm,
    RatioOutOfRange,
)
from .model import (
    HALF,
    MultigeometricSeq,
    as_ratio,
    best_run,
    block_gcd,
    canonicalize,
    subset_sums,
)


class Verdict(str, enum.Enum):
    INTERVALS = "I"
    CANTOR = "C"
    CANTORVAL = "MC"
    UNKNOWN = "Unknown"


class Rule(str, enum.Enum):
    KAKEYA_I = "KAKEYA_I"
    KAKEYA_II = "KAKEYA_II"
    THEOREM_3 = "THEOREM_3"
    CANTORVAL_WINDOW = "CANTORVAL_WINDOW"
    THEOREM_7 = "THEOREM_7"
    SHIFT_EQUIVALENCE = "SHIFT_EQUIVALENCE"


_RELATIONS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
}


def fmt(r) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class Inequality:
    lhs: Fraction
    rel: str
    rhs: Fraction
    lhs_expr: Optional[str] = None

    def holds(self) -> bool:
        return _RELATIONS[self.rel](self.lhs, self.rhs)

    def __str__(self):
        left = self.lhs_expr if self.lhs_expr is not None else fmt(self.lhs)
        return f"{left} {self.rel} {fmt(self.rhs)}"


@dataclass(frozen=True)
class RuleRecord:
    rule_id: Rule
    verdict: Verdict
    witnesses: tuple[Inequality, ...]
    note: str = ""

    @property
    def witness(self) -> str:
        return " and ".join(map(str, self.witnesses))


@dataclass(frozen=True)
class Thresholds:
    kakeya_I_threshold: Fraction
    kakeya_II_bound: Optional[Fraction]
    theorem3_bound: Fraction
    window_lo: Optional[Fraction]
    window_hi_naive: Fraction
    window_hi_refined: Fraction
    monotone_bound: Fraction
    D: int
    d_min: int

    def named(self) -> dict[str, Fraction]:
        """Rational thresholds by name, absent ones omitted."""
        out = {}
        for name in (
            "kakeya_I_threshold",
            "kakeya_II_bound",
            "theorem3_bound",
            "window_lo",
            "window_hi_naive",
            "window_hi_refined",
            "monotone_bound",
        ):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out


@dataclass(frozen=True)
class Classification:
    sequence: MultigeometricSeq
    verdict: Verdict
    provenance: tuple[RuleRecord, ...]
    thresholds: Thresholds
    # nearest known thresholds around q, set for Unknown only
    bracket: Optional[tuple[Fraction, Fraction]] = None
    core: Optional["ShiftDecomposition"] = None
    notes: tuple[str, ...] = field(default=())


def reduced_block(k: Sequence[int]) -> tuple[int, ...]:
    g = block_gcd(k)
    return tuple(v // g for v in k)


def excess(k: Sequence[int]) -> list[int]:
    """D_i = k_i - sum_{l>i} k_l for each block position."""
    out = []
    suffix = 0
    for v in reversed(k):
        out.append(v - suffix)
        suffix += v
    return out[::-1]


def thresholds(x: MultigeometricSeq) -> Thresholds:
    # every threshold is invariant under scaling k, except the run, which
    # needs the gcd-reduced block to see consecutive integers
    k = reduced_block(x.k)
    K = sum(k)
    ex = excess(k)
    D, d_min = max(ex), min(ex)
    sigma = subset_sums(k)
    run = best_run(sigma)
    return Thresholds(
        kakeya_I_threshold=Fraction(D, K + D),
        kakeya_II_bound=Fraction(d_min, K + d_min) if d_min > 0 else None,
        theorem3_bound=Fraction(1, len(sigma)),
        window_lo=Fraction(1, run.n + 1) if run.n >= 1 else None,
        window_hi_naive=Fraction(k[-1], K + k[-1]),
        window_hi_refined=Fraction(D, K + D),
        monotone_bound=Fraction(k[-1], k[0]),
        D=D,
        d_min=d_min,
    )


def theorem7_kappa(k: Sequence[int]) -> Optional[int]:
    """kappa if the gcd-reduced block is (3, 2, ..., 2) with kappa >= 1 twos."""
    k = reduced_block(k)
    if len(k) >= 2 and k[0] == 3 and all(v == 2 for v in k[1:]):
        return len(k) - 1
    return None


def theorem7_point(k: Sequence[int]) -> Optional[Fraction]:
    kappa = theorem7_kappa(k)
    return None if kappa is None else Fraction(1, 2 * kappa + 2)


def applicable_rules(x: MultigeometricSeq, th: Optional[Thresholds] = None) -> list[RuleRecord]:
    """Every rule whose hypotheses hold at x, in evaluation order (a)..(e)."""
    th = th or thresholds(x)
    q = x.q
    out = []

    if q >= th.kakeya_I_threshold:
        out.append(RuleRecord(
            Rule.KAKEYA_I, Verdict.INTERVALS,
            (Inequality(q, ">=", th.kakeya_I_threshold),),
            "every term is at most the sum of the terms after it",
        ))

    if q < th.theorem3_bound:
        out.append(RuleRecord(
            Rule.THEOREM_3, Verdict.CANTOR,
            (Inequality(q, "<", th.theorem3_bound),),
            "card(Sigma) * q < 1, so E has measure zero",
        ))

    if th.kakeya_II_bound is not None and q < th.kakeya_II_bound:
        out.append(RuleRecord(
            Rule.KAKEYA_II, Verdict.CANTOR,
            (Inequality(q, "<", th.kakeya_II_bound),),
            "every term exceeds the sum of the terms after it",
        ))

    if (
        th.window_lo is not None
        and th.window_lo <= q < th.window_hi_refined
        and q <= th.monotone_bound
    ):
        out.append(RuleRecord(
            Rule.CANTORVAL_WINDOW, Verdict.CANTORVAL,
            (
                Inequality(q, ">=", th.window_lo),
                Inequality(q, "<", th.window_hi_refined),
                Inequality(q, "<=", th.monotone_bound),
            ),
            "consecutive block sums give an interval; a block position beats its tail",
        ))

    kappa = theorem7_kappa(x.k)
    if kappa is not None and q == Fraction(1, 2 * kappa + 2):
        out.append(RuleRecord(
            Rule.THEOREM_7, Verdict.CANTORVAL,
            (
                Inequality(q, "==", Fraction(1, 2 * kappa + 2)),
                Inequality(q, "<", th.window_hi_refined),
            ),
            f"[3,4] lies in E by base-{2 * kappa + 2} digits (kappa={kappa})",
        ))
    return out


def _bracket(x: MultigeometricSeq, th: Thresholds) -> tuple[Fraction, Fraction]:
    known = set(th.named().values())
    p = theorem7_point(x.k)
    if p is not None:
        known.add(p)
    below = [t for t in known if t <= x.q]
    above = [t for t in known if t > x.q]
    return (max(below, default=Fraction(0)), min(above, default=HALF))


def _check_consistent(records: Sequence[RuleRecord]) -> None:
    verdicts = {r.verdict for r in records}
    if len(verdicts) > 1:
        raise InternalInconsistency(
            "contradictory rules: " + ", ".join(f"{r.rule_id.value}->{r.verdict.value}" for r in records)
        )
    for r in records:
        for w in r.witnesses:
            if not w.holds():
                raise InternalInconsistency(f"{r.rule_id.value} witness fails: {w}")


def classify(x: MultigeometricSeq, reblock: bool = True, search_bound: int = 3) -> Classification:
    th = thresholds(x)
    records = applicable_rules(x, th)
    _check_consistent(records)
    notes = ()
    g = block_gcd(x.k)
    if g > 1:
        notes = (f"block divided by gcd {g}",)
    if records:
        return Classification(x, records[0].verdict, tuple(records), th, notes=notes)

    if reblock:
        dec = shift_normalize([(v, 0) for v in x.k], x.q, search_bound)
        if dec is not None and dec.core != x:
            inner = classify(dec.core, reblock=False)
            if inner.verdict is not Verdict.UNKNOWN:
                rec = _shift_record(dec, inner.verdict)
                return Classification(
                    x, inner.verdict, (rec,) + inner.provenance, th,
                    core=dec, notes=notes + inner.notes,
                )
    return Classification(x, Verdict.UNKNOWN, (), th, bracket=_bracket(x, th), notes=notes)


def classify_scaled(x: MultigeometricSeq, alpha) -> Classification:
    """Classify alpha * x, which must again have an integer block."""
    alpha = as_ratio(alpha)
    if alpha <= 0:
        raise NonIntegralScale(f"scale {alpha} must be positive")
    scaled = [alpha * v for v in x.k]
    bad = [s for s in scaled if s.denominator != 1]
    if bad:
        raise NonIntegralScale(f"{fmt(alpha)} * block has non-integer entry {fmt(bad[0])}")
    return classify(canonicalize([int(s) for s in scaled], x.q))


@dataclass(frozen=True)
class ShiftDecomposition:
    """Term multiset = head + full term multiset of ``core``."""

    head: tuple[Fraction, ...]
    core: MultigeometricSeq
    # (coef, exponent, shift, core entry) per input term
    moves: tuple[tuple[int, int, int, int], ...]


def shift_normalize(terms: Sequence[tuple[int, int]], q, search_bound: int = 3) -> Optional[ShiftDecomposition]:
    """Re-block {coef q^(e+j) : j >= 0} per term into head + (k'; q).

    Each stream may drop its first ``t`` terms (0 <= t <= search_bound) into
    the head, making coef q^(e+t) the new block entry, which must be an
    integer.  Among all choices the lexicographically smallest descending
    block k' wins.  Returns None when some stream has no integer entry.
    """
    q = as_ratio(q)
    if not 0 < q < HALF:
        raise RatioOutOfRange(f"q = {q} is outside (0, 1/2)")
    if not terms:
        raise InputError("empty term list")
    options = []
    for coef, e in terms:
        if coef < 1:
            raise NonPositiveTerm(f"coefficient {coef} is not positive")
        if abs(e) > search_bound:
            raise InputError(f"exponent {e} exceeds search bound {search_bound}")
        opts = []
        for t in range(search_bound + 1):
            v = coef * q ** (e + t)
            if v.denominator == 1:
                opts.append((t, int(v)))
        if not opts:
            return None
        options.append(opts)

    best = None
    for choice in itertools.product(*options):
        key = tuple(sorted((v for _, v in choice), reverse=True))
        if best is None or key < best[0]:
            best = (key, choice)
    key, choice = best
    head = []
    moves = []
    for (coef, e), (t, v) in zip(terms, choice):
        head.extend(coef * q ** (e + j) for j in range(t))
        moves.append((coef, e, t, v))
    return ShiftDecomposition(tuple(sorted(head, reverse=True)), MultigeometricSeq(key, q), tuple(moves))


def _shift_record(dec: ShiftDecomposition, verdict: Verdict) -> RuleRecord:
    q = dec.core.q
    wits = tuple(
        Inequality(coef * q ** (e + t), "==", Fraction(v), f"{coef}*({fmt(q)})^{e + t}")
        for coef, e, t, v in dec.moves
    )
    head = ", ".join(fmt(h) for h in dec.head) or "none"
    return RuleRecord(
        Rule.SHIFT_EQUIVALENCE, verdict, wits,
        f"same class as core {dec.core}; head terms: {head}",
    )


def classify_terms(terms: Sequence[tuple[int, int]], q, search_bound: int = 3) -> Classification:
    """Classify the series whose terms are {coef q^(e+j)} via its re-blocked core."""
    dec = shift_normalize(terms, q, search_bound)
    if dec is None:
        raise InputError(f"no multigeometric re-blocking within search bound {search_bound}")
    inner = classify(dec.core, reblock=False)
    if inner.verdict is Verdict.UNKNOWN:
        return Classification(dec.core, Verdict.UNKNOWN, (), inner.thresholds,
                              bracket=inner.bracket, core=dec, notes=inner.notes)
    rec = _shift_record(dec, inner.verdict)
    return Classification(dec.core, inner.verdict, (rec,) + inner.provenance,
                          inner.thresholds, core=dec, notes=inner.notes)
