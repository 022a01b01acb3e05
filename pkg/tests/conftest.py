from fractions import Fraction
from itertools import product

import pytest
from hypothesis import strategies as st

from achievement import canonicalize

blocks = st.lists(st.integers(1, 40), min_size=1, max_size=8)

# q = a/b strictly inside (0, 1/2)
ratios = st.integers(3, 60).flatmap(
    lambda b: st.integers(1, (b - 1) // 2).map(lambda a: Fraction(a, b))
)

# (block, q) pairs quoted as worked examples
FIXTURES = {
    "ex-WS": ((8, 7, 6, 5, 4), Fraction(1, 10)),
    "ex-F": ((7, 6, 5, 4, 3), Fraction(2, 27)),
    "ex-JV": ((3, 2, 2, 2), Fraction(1, 6)),
    "ex-h": ((10, 9, 8, 7, 6, 5, 2), Fraction(2, 49)),
    "GN": ((3, 2), Fraction(1, 4)),
}


def brute_subset_sums(k):
    """Sorted distinct sums over all 2^m sub-blocks."""
    return sorted({sum(v for v, e in zip(k, eps) if e) for eps in product((0, 1), repeat=len(k))})


def brute_merge(intervals):
    """Merge closed intervals, touching ones included."""
    out = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


@pytest.fixture(params=sorted(FIXTURES), ids=sorted(FIXTURES))
def fixture_seq(request):
    k, q = FIXTURES[request.param]
    return canonicalize(k, q)


# one summary line per acceptance criterion
_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    prev = _criteria.get(name, "PASS")
    _criteria[name] = "FAIL" if report.outcome == "failed" or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _criteria.items():
        terminalreporter.write_line(f"{status}  {name}")
