"""Verdict regions over q for the blocks (3, 2, ..., 2) with kappa twos."""

import argparse

from achievement.render import scan_ascii
from achievement.scan import family_block, scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-kappa", type=int, default=5)
    ap.add_argument("--width", type=int, default=72)
    args = ap.parse_args()
    for kappa in range(1, args.max_kappa + 1):
        print(scan_ascii(scan(family_block(kappa)), width=args.width))


if __name__ == "__main__":
    main()
