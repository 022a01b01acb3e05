"""Print Sigma, runs, thresholds and verdicts for the worked examples."""

from fractions import Fraction

from achievement import best_run, canonicalize, classify, sigma_set
from achievement.approximator import default_certificates
from achievement.classifier import fmt

EXAMPLES = {
    "ex-WS": ((8, 7, 6, 5, 4), Fraction(1, 10)),
    "ex-F": ((7, 6, 5, 4, 3), Fraction(2, 27)),
    "ex-JV": ((3, 2, 2, 2), Fraction(1, 6)),
    "ex-h": ((10, 9, 8, 7, 6, 5, 2), Fraction(2, 49)),
    "GN": ((3, 2), Fraction(1, 4)),
}


def main():
    for name, (k, q) in EXAMPLES.items():
        x = canonicalize(k, q)
        sig = sigma_set(x)
        run = best_run(sig)
        c = classify(x)
        print(f"{name:<6} {x}")
        print(f"  card Sigma {len(sig)}  run (n0={run.n0}, n={run.n})")
        print(f"  kakeya_I   {fmt(c.thresholds.kakeya_I_threshold)}")
        print(f"  verdict    {c.verdict.value} via {', '.join(r.rule_id.value for r in c.provenance)}")
        for cert in default_certificates(x):
            print(f"  interval   [{fmt(cert.lo)}, {fmt(cert.hi)}] ({cert.method})")


if __name__ == "__main__":
    main()
