import random
from fractions import Fraction

import pytest
from hypothesis import given

from achievement import (
    Rule,
    Verdict,
    canonicalize,
    classify,
    classify_scaled,
    classify_terms,
    component_cover,
    shift_normalize,
    tail_sum,
    term,
    thresholds,
)
from achievement.classifier import applicable_rules, excess
from achievement.errors import NonIntegralScale

from conftest import FIXTURES, blocks, ratios

F = Fraction


@pytest.mark.parametrize(
    "k, expected",
    [
        ((10, 9, 8, 7, 6, 5, 2), F(3, 50)),
        ((8, 7, 6, 5, 4), F(4, 34)),
        ((7, 6, 5, 4, 3), F(3, 28)),
        ((3, 2, 2, 2), F(2, 11)),
        ((3, 2), F(2, 7)),
    ],
)
def test_kakeya_threshold(k, expected):
    assert thresholds(canonicalize(k, "1/5")).kakeya_I_threshold == expected


def test_thresholds_3_2():
    th = thresholds(canonicalize([3, 2], "1/5"))
    assert th.theorem3_bound == F(1, 4)
    assert th.kakeya_II_bound == F(1, 6)
    assert th.window_lo == F(1, 2)
    assert th.monotone_bound == F(2, 3)


def test_thresholds_jones_velleman_window():
    th = thresholds(canonicalize([3, 2, 2, 2], "1/6"))
    assert th.window_lo == F(1, 6)
    assert th.window_hi_naive == F(2, 11)
    assert th.kakeya_II_bound is None


def test_excess_values():
    assert excess((8, 7, 6, 5, 4)) == [-14, -8, -3, 1, 4]


@given(blocks, ratios)
def test_threshold_invariants(k, q):
    th = thresholds(canonicalize(k, q))
    assert th.window_hi_naive <= th.window_hi_refined
    assert th.theorem3_bound <= F(1, 2)
    for v in th.named().values():
        # k_m/k_1 is 1 for constant blocks
        assert 0 < v <= 1


@pytest.mark.parametrize(
    "k, q, verdict, rule",
    [
        ((3, 2, 2, 2), "1/6", Verdict.CANTORVAL, Rule.CANTORVAL_WINDOW),
        ((10, 9, 8, 7, 6, 5, 2), "2/49", Verdict.CANTORVAL, Rule.CANTORVAL_WINDOW),
        ((3, 2), "1/4", Verdict.CANTORVAL, Rule.THEOREM_7),
        ((3, 2), "27/100", Verdict.UNKNOWN, None),
        ((8, 7, 6, 5, 4), "1/10", Verdict.CANTORVAL, Rule.CANTORVAL_WINDOW),
        ((7, 6, 5, 4, 3), "1/30", Verdict.CANTOR, Rule.THEOREM_3),
        ((3, 2), "2/7", Verdict.INTERVALS, Rule.KAKEYA_I),
        ((3, 2), "1/5", Verdict.CANTOR, Rule.THEOREM_3),
    ],
)
def test_classify_examples(k, q, verdict, rule):
    c = classify(canonicalize(k, q))
    assert c.verdict is verdict
    if rule is None:
        assert c.provenance == ()
    else:
        assert c.provenance[0].rule_id is rule


def test_ex_h_needs_refined_window():
    # 2/49 is exactly the naive upper end, so only the refined bound admits it
    c = classify(canonicalize((10, 9, 8, 7, 6, 5, 2), "2/49"))
    th = c.thresholds
    assert F(2, 49) == th.window_hi_naive
    witnesses = {str(w) for w in c.provenance[0].witnesses}
    assert {"2/49 >= 1/38", "2/49 < 3/50"} <= witnesses


@pytest.mark.parametrize("q", ["1/45", "1/60", "1/43"])
def test_ex_h_cantor_below_one_over_42(q):
    assert classify(canonicalize((10, 9, 8, 7, 6, 5, 2), q)).verdict is Verdict.CANTOR


def test_unknown_brackets_nearest_thresholds():
    c = classify(canonicalize([3, 2], "27/100"))
    assert c.bracket == (F(1, 4), F(2, 7))


def test_ws_unknown_gap():
    # q in [1/25, 1/23) is left open for (8,7,6,5,4)
    assert classify(canonicalize((8, 7, 6, 5, 4), "1/24")).verdict is Verdict.UNKNOWN
    assert classify(canonicalize((8, 7, 6, 5, 4), "1/26")).verdict is Verdict.CANTOR


@pytest.mark.parametrize("kappa", range(1, 7))
def test_theorem7_family(kappa):
    x = canonicalize((3,) + (2,) * kappa, F(1, 2 * kappa + 2))
    c = classify(x)
    assert c.verdict is Verdict.CANTORVAL
    assert Rule.THEOREM_7 in {r.rule_id for r in c.provenance}


@pytest.mark.parametrize("kappa", range(3, 8))
def test_jones_family_window(kappa):
    # (3, 2 x kappa; q) is MC on [1/(2 kappa), 2/(2 kappa + 5))
    lo, hi = F(1, 2 * kappa), F(2, 2 * kappa + 5)
    k = (3,) + (2,) * kappa
    assert classify(canonicalize(k, lo)).verdict is Verdict.CANTORVAL
    assert classify(canonicalize(k, hi)).verdict is Verdict.INTERVALS
    assert classify(canonicalize(k, (lo + hi) / 2)).verdict is Verdict.CANTORVAL


@pytest.mark.parametrize("k", [(3, 2), (3, 2, 2)])
def test_window_empty_for_short_families(k):
    th = thresholds(canonicalize(k, "1/5"))
    assert th.window_lo >= th.window_hi_refined


def test_classify_scaled():
    x = canonicalize((8, 7, 6, 5, 4), "1/10")
    assert classify_scaled(x, 3).verdict is classify(x).verdict is Verdict.CANTORVAL
    assert classify_scaled(x, 3).sequence.k == (24, 21, 18, 15, 12)
    assert classify_scaled(x, 1).verdict is classify(x).verdict
    with pytest.raises(NonIntegralScale):
        classify_scaled(x, F(3, 10))
    with pytest.raises(NonIntegralScale):
        classify_scaled(canonicalize([3, 2], "1/4"), F(1, 2))


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("alpha", [2, 3, 5])
def test_scale_invariance(name, alpha):
    k, q = FIXTURES[name]
    assert classify(canonicalize([alpha * v for v in k], q)).verdict is classify(canonicalize(k, q)).verdict


def test_shift_normalize_kenyon():
    dec = shift_normalize([(12, 0), (2, 0)], "1/4")
    assert dec.head == (12,)
    assert dec.core.k == (3, 2)


def test_shift_normalize_3_8():
    dec = shift_normalize([(8, 0), (3, 0)], "1/4")
    assert dec.core.k == (3, 2)
    # 8 leaves the stream 8, 2, 1/2, ... so it is the single head term
    assert dec.head == (8,)


def test_shift_normalize_2_1():
    dec = shift_normalize([(2, 0), (1, 0)], "1/4")
    assert dec.head == ()
    assert classify(dec.core).verdict is Verdict.INTERVALS


def test_shift_normalize_absent():
    assert shift_normalize([(3, 1)], "1/4") is None


def test_shift_multiset_identity():
    # head + core terms reproduce the input terms exactly, up to a depth
    terms, q = [(12, 0), (2, 0), (8, -1)], F(1, 4)
    dec = shift_normalize(terms, q)
    n = 6
    lhs = sorted(c * q ** (e + j) for c, e in terms for j in range(n + 2))
    core = sorted(list(dec.head) + [v * q**j for v in dec.core.k for j in range(n + 2)])
    # compare terms above the truncation floor
    floor_ = min(c * q ** (e + n) for c, e in terms)
    assert [t for t in lhs if t > floor_] == [t for t in core if t > floor_]


def test_shift_invariance():
    a = classify_terms([(3, 0), (8, 0)], "1/4")
    b = classify(canonicalize([3, 2], "1/4"))
    c = classify_terms([(3, 0), (2, -1)], "1/4")
    d = classify_terms([(3, -1), (2, 0)], "1/4")
    assert a.verdict is b.verdict is c.verdict is d.verdict is Verdict.CANTORVAL
    assert a.provenance[0].rule_id is Rule.SHIFT_EQUIVALENCE
    assert all(w.holds() for w in a.provenance[0].witnesses)


def test_kenyon_via_scale_then_shift():
    f = canonicalize([6, 1], "1/4")
    c = classify_scaled(f, 2)
    assert c.verdict is Verdict.CANTORVAL
    assert c.core is not None and c.core.core.k == (3, 2)


def test_reblock_only_when_direct_rules_fail():
    c = classify(canonicalize([8, 3], "1/4"))
    assert c.verdict is Verdict.CANTORVAL
    assert c.provenance[0].rule_id is Rule.SHIFT_EQUIVALENCE


@given(blocks, ratios)
def test_every_witness_holds(k, q):
    c = classify(canonicalize(k, q))
    if c.verdict is not Verdict.UNKNOWN:
        assert c.provenance
    for r in c.provenance:
        assert all(w.holds() for w in r.witnesses)
        assert r.verdict is c.verdict


@given(blocks, ratios)
def test_kakeya_threshold_is_exact(k, q):
    x = canonicalize(k, q)
    # per-position check on the actual terms and tails, across two blocks
    every = all(term(x, i) <= tail_sum(x, i) for i in range(1, 2 * x.m + 1))
    assert every == (q >= thresholds(x).kakeya_I_threshold)


def test_kakeya_threshold_random_grid():
    rng = random.Random(7)
    for _ in range(40):
        k = [rng.randint(1, 30) for _ in range(rng.randint(1, 8))]
        for _ in range(100):
            b = rng.randint(3, 200)
            q = F(rng.randint(1, (b - 1) // 2), b)
            x = canonicalize(k, q)
            every = all(term(x, i) <= tail_sum(x, i) for i in range(1, x.m + 1))
            assert every == (q >= thresholds(x).kakeya_I_threshold)


def test_no_conflicting_rules_on_random_grid():
    rng = random.Random(2024)
    for _ in range(10_000):
        k = [rng.randint(1, 25) for _ in range(rng.randint(1, 7))]
        b = rng.randint(3, 120)
        q = F(rng.randint(1, (b - 1) // 2), b)
        x = canonicalize(k, q)
        verdicts = {r.verdict for r in applicable_rules(x)}
        assert len(verdicts) <= 1
        if Verdict.INTERVALS in verdicts:
            assert not verdicts & {Verdict.CANTOR, Verdict.CANTORVAL}


I_FIXTURES = [
    ((3, 2), F(2, 7)),
    ((3, 2, 2, 2), F(2, 11)),
    ((8, 7, 6, 5, 4), F(4, 34)),
    ((7, 6, 5, 4, 3), F(3, 28)),
    ((10, 9, 8, 7, 6, 5, 2), F(3, 50)),
]


@pytest.mark.parametrize("k, q", I_FIXTURES)
def test_interval_verdict_has_bounded_cover(k, q):
    x = canonicalize(k, q)
    assert classify(x).verdict is Verdict.INTERVALS
    counts = [component_cover(x, d).component_count for d in range(9)]
    # the tail criterion holds at every position, so E is one interval
    assert set(counts) == {1}
