"""Command line front end.

Exit codes: 0 success (an Unknown verdict included), 2 input error,
3 budget or cap exceeded, 4 certificate not applicable.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import render
from .approximator import (
    DEFAULTS,
    Membership,
    certificate_theorem2,
    certificate_theorem7,
    depth_cover,
    membership_test,
    oracle_subsums,
    self_covering,
)
from .classifier import classify, fmt, theorem7_kappa
from .errors import BudgetExceeded, CapExceeded, InputError
from .model import canonicalize, sigma_set
from .scan import scan

EXIT_INPUT, EXIT_BUDGET, EXIT_INAPPLICABLE = 2, 3, 4

SHOWN_COMPONENTS = 20


class Inapplicable(Exception):
    pass


def parse_block(text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(int(tok))
        except ValueError:
            raise InputError(f"invalid block entry {tok!r} in {text!r}") from None
    return out


def parse_ratio(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"invalid ratio {text!r}; expected a/b") from None


def _seq(args):
    return canonicalize(parse_block(args.sequence), parse_ratio(args.q))


def _emit_svg(args, svg: str) -> None:
    if args.svg:
        Path(args.svg).write_text(svg, encoding="ascii")


def cmd_classify(args) -> str:
    x = _seq(args)
    c = classify(x, search_bound=DEFAULTS.shift_search_bound)
    if args.json:
        return render.dumps(render.classification_json(c))
    lines = [f"sequence  {x}", f"verdict   {c.verdict.value}"]
    if c.bracket is not None:
        lo, hi = c.bracket
        lines.append(f"bracket   q between known thresholds {fmt(lo)} and {fmt(hi)}")
    if c.core is not None:
        head = ", ".join(fmt(h) for h in c.core.head) or "none"
        lines.append(f"core      {c.core.core} (head: {head})")
    lines.append("thresholds")
    for name, v in c.thresholds.named().items():
        lines.append(f"  {name:<20} {fmt(v):<10} {render.dec(v)}")
    lines.append("provenance")
    if not c.provenance:
        lines.append("  none (no sufficient condition applies)")
    for r in c.provenance:
        lines.append(f"  {r.rule_id.value:<18} {r.verdict.value:<3} {r.witness}")
        lines.append(f"  {'':<18}     {r.note}")
    for n in c.notes:
        lines.append(f"note      {n}")
    return "\n".join(lines) + "\n"


def cmd_scan(args) -> str:
    report = scan(parse_block(args.sequence), resolution=args.resolution)
    _emit_svg(args, render.scan_svg(report, width=args.width))
    if args.json:
        return render.dumps(render.scan_json(report))
    out = render.scan_ascii(report, width=min(args.width, 100))
    if report.samples and args.resolution:
        out += "samples:\n" + "".join(
            f"  {fmt(q):<10} {render.dec(q):<10} {v.value}\n" for q, v in report.samples
        )
    return out


def _depth(args, default):
    return default if args.depth is None else args.depth


def cmd_cover(args) -> str:
    x = _seq(args)
    d = _depth(args, DEFAULTS.display_depth)
    cover = depth_cover(x, d, budget=args.budget)
    _emit_svg(args, render.cover_svg(x, cover, width=args.width))
    if args.json:
        return render.dumps(render.cover_json(x, cover))
    bound = x.total * (len(sigma_set(x)) * x.q) ** d
    lines = [
        f"sequence        {x}",
        f"depth           {d}",
        f"points          {len(cover.scaled_points)}",
        f"tail radius     {fmt(cover.tail_radius)}",
        f"components      {cover.component_count}",
        f"total length    {fmt(cover.total_length)}  ({render.dec(cover.total_length)})",
        f"measure bound   {fmt(bound)}  ({render.dec(bound)})  = total(0) * (card(Sigma) q)^d",
    ]
    comps = cover.components[:SHOWN_COMPONENTS]
    lines.append("components (lo, hi, length):")
    for lo, hi in comps:
        lines.append(f"  [{fmt(lo)}, {fmt(hi)}]  {fmt(hi - lo)}")
    if cover.component_count > SHOWN_COMPONENTS:
        lines.append(f"  ... {cover.component_count - SHOWN_COMPONENTS} more")
    return "\n".join(lines) + "\n"


def cmd_oracle(args) -> str:
    x = _seq(args)
    o = oracle_subsums(x, args.n_terms, allow_large=args.allow_large)
    gap = o.largest_gap()
    if args.json:
        return render.dumps({
            "sequence": list(x.k),
            "q": fmt(x.q),
            "n_terms": o.n_terms,
            "distinct_sums": len(o.scaled_sums),
            "min": fmt(o.sums[0]),
            "max": fmt(o.sums[-1]),
            "largest_gap": [fmt(gap[0]), fmt(gap[1])] if gap else None,
        })
    lines = [
        f"sequence        {x}",
        f"terms           {o.n_terms}",
        f"distinct sums   {len(o.scaled_sums)} (of {2 ** o.n_terms})",
        f"range           [{fmt(o.sums[0])}, {fmt(o.sums[-1])}]",
    ]
    if gap:
        lines.append(f"largest gap     ({fmt(gap[0])}, {fmt(gap[1])})  width {fmt(gap[1] - gap[0])}")
    return "\n".join(lines) + "\n"


def cmd_certify(args) -> str:
    x = _seq(args)
    summary = {"sequence": list(x.k), "q": fmt(x.q), "method": args.method}
    if args.method == "th7":
        kappa = theorem7_kappa(x.k)
        if kappa is None or x.k[0] != 3 or x.q != Fraction(1, 2 * kappa + 2):
            raise Inapplicable("th7 needs block (3, 2, ..., 2) and q = 1/(2k+2)")
        depth = _depth(args, 3)
        cert = certificate_theorem7(kappa, depth, budget=args.budget)
        B = 2 * kappa + 2
        # independent re-check: exact finite representation found by search
        found = sum(
            membership_test(x, 3 + Fraction(j, B**depth), depth + 1, certified=()) is Membership.IN
            for j in range(B**depth + 1)
        )
        summary.update(
            interval=[fmt(cert.lo), fmt(cert.hi)],
            witness_depth=cert.witness_depth,
            grid_points=cert.points_checked,
            resummed_exactly=cert.points_checked,
            found_by_search=f"{found}/{cert.points_checked}",
        )
    else:
        cert = certificate_theorem2(x)
        if cert is None:
            raise Inapplicable("th2 needs q >= 1/(n+1) for the longest run of block sums")
        depth = _depth(args, 3)
        cover = depth_cover(x, depth, budget=args.budget)
        summary.update(
            interval=[fmt(cert.lo), fmt(cert.hi)],
            witness_depth=depth,
            self_covering=self_covering(x, cert.lo, cert.hi),
            inside_cover=cover.contains_interval(cert.lo, cert.hi),
        )
    if args.json:
        return render.dumps(summary)
    lo, hi = summary["interval"]
    lines = [f"sequence          {x}", f"certificate       [{lo}, {hi}] via {args.method}"]
    for key, value in summary.items():
        if key not in ("sequence", "q", "method", "interval"):
            lines.append(f"{key:<18}{value}")
    return "\n".join(lines) + "\n"


def cmd_render(args) -> str:
    fmt_ = args.format
    labels = not args.no_labels
    if args.width is None:
        args.width = 800 if fmt_ == "svg" else 72
    if args.q is None:
        report = scan(parse_block(args.sequence))
        if fmt_ == "svg":
            out = render.scan_svg(report, width=args.width, labels=labels)
        elif fmt_ == "json":
            out = render.dumps(render.scan_json(report))
        else:
            out = render.scan_ascii(report, width=args.width, labels=labels)
    else:
        x = _seq(args)
        cover = depth_cover(x, _depth(args, DEFAULTS.display_depth), budget=args.budget)
        if fmt_ == "svg":
            out = render.cover_svg(x, cover, width=args.width, labels=labels)
        elif fmt_ == "json":
            out = render.dumps(render.cover_json(x, cover))
        else:
            out = render.cover_ascii(x, cover, width=args.width, labels=labels)
    if args.svg and fmt_ == "svg":
        Path(args.svg).write_text(out, encoding="ascii")
        return ""
    return out


def _globals(defaults: bool) -> argparse.ArgumentParser:
    # on subparsers the defaults are suppressed so flags given before the
    # subcommand are not overwritten
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    p.add_argument("--svg", metavar="PATH", default=d(None), help="also write an SVG picture")
    p.add_argument("--budget", type=int, metavar="N", default=d(DEFAULTS.points), help="point budget")
    p.add_argument("--depth", type=int, metavar="D", default=d(None), help="block depth")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _globals(defaults=False)
    parser = argparse.ArgumentParser(
        prog="achievement",
        description="Classify achievement sets of multigeometric series (k1,...,km; q).",
        parents=[_globals(defaults=True)],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="verdict with thresholds and provenance")
    p.add_argument("sequence", help="block, e.g. 3,2,2,2")
    p.add_argument("q", help="ratio a/b in (0, 1/2)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("scan", parents=[common], help="verdict regions over q in (0, 1/2)")
    p.add_argument("sequence")
    p.add_argument("--resolution", type=int, default=0, help="extra evenly spaced samples")
    p.add_argument("--width", type=int, default=800)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("cover", parents=[common], help="depth-d outer cover of E")
    p.add_argument("sequence")
    p.add_argument("q")
    p.add_argument("--width", type=int, default=800)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("oracle", parents=[common], help="all subsums of the first N terms")
    p.add_argument("sequence")
    p.add_argument("q")
    p.add_argument("n_terms", type=int, metavar="N")
    p.add_argument("--allow-large", action="store_true", help=f"permit N > {DEFAULTS.oracle_soft_cap}")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("certify", parents=[common], help="interval inside E")
    p.add_argument("sequence")
    p.add_argument("q")
    p.add_argument("--method", choices=("th2", "th7"), default="th2")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("render", parents=[common], help="draw a scan (no q) or a cover (with q)")
    p.add_argument("sequence")
    p.add_argument("q", nargs="?")
    p.add_argument("--format", choices=("ascii", "svg", "json"), default="ascii")
    p.add_argument("--width", type=int, default=None, help="columns (ascii, default 72) or pixels (svg, default 800)")
    p.add_argument("--no-labels", action="store_true")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except InputError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, CapExceeded) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except Inapplicable as e:
        print(f"error: certificate not applicable: {e}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out)
    return 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
