"""Total cover length against depth, next to the card(Sigma) q bound.

Below 1/card(Sigma) the length must fall geometrically (Cantor sets have
measure zero); in a Cantorval or interval regime it levels off.
"""

import argparse
from fractions import Fraction

from achievement import canonicalize, component_cover, sigma_set
from achievement.errors import BudgetExceeded


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("block", help="e.g. 3,2")
    ap.add_argument("ratios", nargs="+", help="values of q, e.g. 1/5 1/4 2/7")
    ap.add_argument("--depth", type=int, default=10)
    args = ap.parse_args()
    k = [int(t) for t in args.block.split(",")]
    for q in args.ratios:
        x = canonicalize(k, Fraction(q))
        rate = len(sigma_set(x)) * x.q
        print(f"{x}  card(Sigma) q = {rate}")
        for d in range(args.depth + 1):
            try:
                c = component_cover(x, d)
            except BudgetExceeded as e:
                print(f"  stopped: {e}")
                break
            bound = x.total * rate**d
            print(f"  d={d:<3} components={c.component_count:<8} length={float(c.total_length):<12.6g} bound={float(bound):.6g}")


if __name__ == "__main__":
    main()
