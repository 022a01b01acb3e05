"""ASCII / SVG / JSON renderings of scan number lines and cover bars.

Machine-readable output writes rationals as reduced "a/b" strings; decimals
appear only in human-oriented text columns (6 significant digits).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional
from xml.sax.saxutils import escape

from .approximator import DepthCover
from .classifier import Classification, Verdict, fmt
from .model import HALF
from .scan import ScanReport

MIN_WIDTH = 40

_ASCII_FILL = {
    Verdict.CANTOR: "C",
    Verdict.CANTORVAL: "M",
    Verdict.UNKNOWN: "?",
    Verdict.INTERVALS: "I",
}
_SHORT = {
    Verdict.CANTOR: "C",
    Verdict.CANTORVAL: "MC",
    Verdict.UNKNOWN: "?",
    Verdict.INTERVALS: "I",
}
_COLOURS = {
    Verdict.CANTOR: "#9ecae1",
    Verdict.CANTORVAL: "#fdae6b",
    Verdict.UNKNOWN: "#d9d9d9",
    Verdict.INTERVALS: "#a1d99b",
}


def dec(r) -> str:
    return f"{float(r):.6g}"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"


def _check_width(width: int) -> None:
    if width < MIN_WIDTH:
        raise ValueError(f"width {width} is below the minimum {MIN_WIDTH}")


# JSON ---------------------------------------------------------------------


def classification_json(c: Classification) -> dict:
    out = {
        "sequence": list(c.sequence.k),
        "q": fmt(c.sequence.q),
        "verdict": c.verdict.value,
        "thresholds": {name: fmt(v) for name, v in c.thresholds.named().items()},
        "provenance": [
            {"rule": r.rule_id.value, "witness": r.witness} for r in c.provenance
        ],
    }
    if c.bracket is not None:
        out["bracket"] = [fmt(c.bracket[0]), fmt(c.bracket[1])]
    if c.core is not None:
        out["core"] = {
            "sequence": list(c.core.core.k),
            "head": [fmt(h) for h in c.core.head],
        }
    return out


def scan_json(report: ScanReport) -> dict:
    return {
        "sequence": list(report.k),
        "critical_points": [
            {"q": fmt(c.q), "labels": list(c.labels)} for c in report.critical_points
        ],
        "regions": [
            {
                "lo": fmt(r.lo),
                "hi": fmt(r.hi),
                "lo_closed": r.lo_closed,
                "hi_closed": r.hi_closed,
                "verdict": r.verdict.value,
                "rule": r.rule.value if r.rule is not None else None,
            }
            for r in report.regions
        ],
        "samples": [{"q": fmt(q), "verdict": v.value} for q, v in report.samples],
    }


def cover_json(x, cover: DepthCover, max_components: Optional[int] = None) -> dict:
    comps = cover.components if max_components is None else cover.components[:max_components]
    return {
        "sequence": list(x.k),
        "q": fmt(x.q),
        "depth": cover.depth,
        "tail_radius": fmt(cover.tail_radius),
        "points": len(cover.scaled_points),
        "component_count": cover.component_count,
        "total_length": fmt(cover.total_length),
        "components": [[fmt(lo), fmt(hi)] for lo, hi in comps],
    }


# ASCII --------------------------------------------------------------------


def _col(q, lo, hi, width) -> int:
    return min(width - 1, int((Fraction(q) - lo) / (hi - lo) * (width - 1)))


def _label_rows(marks: list[tuple[int, str]], width: int) -> list[str]:
    rows: list[list[str]] = []
    for col, text in marks:
        start = max(0, min(col, width - len(text)))
        for row in rows:
            if all(c == " " for c in row[max(0, start - 1):start + len(text) + 1]):
                break
        else:
            row = [" "] * width
            rows.append(row)
        row[start:start + len(text)] = text
    return ["".join(r).rstrip() for r in rows]


def scan_ascii(report: ScanReport, width: int = 72, labels: bool = True) -> str:
    _check_width(width)
    lo, hi = Fraction(0), HALF
    band = [" "] * width
    for r in report.regions:
        if r.is_point:
            continue
        a = _col(r.lo, lo, hi, width)
        b = _col(r.hi, lo, hi, width)
        for i in range(a, b + 1):
            band[i] = _ASCII_FILL[r.verdict]
    for r in report.regions:
        if r.is_point:
            band[_col(r.lo, lo, hi, width)] = "*"
    axis = ["-"] * width
    axis[0] = axis[-1] = "+"
    for c in report.critical_points:
        axis[_col(c.q, lo, hi, width)] = "|"
    lines = [f"k = ({','.join(map(str, report.k))}), q in (0, 1/2)", "".join(band), "".join(axis)]
    if labels:
        marks = [(0, "0")] + [(_col(c.q, lo, hi, width), fmt(c.q)) for c in report.critical_points]
        marks.append((width - 1, "1/2"))
        lines += _label_rows(marks, width)
    lines.append("")
    lines.append("regions:")
    for r in report.regions:
        rule = r.rule.value if r.rule is not None else "-"
        lines.append(f"  {r.notation():<24} {_SHORT[r.verdict]:<3} {rule}")
    if report.critical_points:
        lines.append("critical points:")
        for c in report.critical_points:
            lines.append(f"  {fmt(c.q):<10} {dec(c.q):<10} {', '.join(c.labels)}")
    lines.append("legend: C Cantor set, M Cantorval, ? unknown, I intervals, * single point")
    return "\n".join(lines) + "\n"


def cover_ascii(x, cover: DepthCover, width: int = 72, labels: bool = True) -> str:
    _check_width(width)
    lo, hi = Fraction(0), x.total
    band = [" "] * width
    for a, b in cover.components:
        for i in range(_col(a, lo, hi, width), _col(b, lo, hi, width) + 1):
            band[i] = "#"
    lines = [f"cover of E{x} at depth {cover.depth}", "".join(band)]
    if labels:
        lines += _label_rows([(0, "0"), (width - 1 - len(fmt(hi)), fmt(hi))], width)
    return "\n".join(lines) + "\n"


# SVG ----------------------------------------------------------------------

_SVG_HEAD = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
)


def _text(x, y, s, size=11, anchor="middle") -> str:
    return (
        f'<text x="{x:.2f}" y="{y:.2f}" font-family="sans-serif" font-size="{size}" '
        f'text-anchor="{anchor}">{escape(s)}</text>\n'
    )


def scan_svg(report: ScanReport, width: int = 800, labels: bool = True) -> str:
    _check_width(width)
    margin, height = 30.0, 140
    span = width - 2 * margin
    y_axis = 60.0

    def xpos(q):
        return margin + float(Fraction(q) / HALF) * span

    out = [_SVG_HEAD.format(w=width, h=height)]
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n')
    for r in report.regions:
        if r.is_point:
            continue
        x0, x1 = xpos(r.lo), xpos(r.hi)
        out.append(
            f'<rect x="{x0:.2f}" y="{y_axis - 14:.2f}" width="{x1 - x0:.2f}" height="28" '
            f'fill="{_COLOURS[r.verdict]}"/>\n'
        )
        if labels:
            out.append(_text((x0 + x1) / 2, y_axis + 36, _SHORT[r.verdict], size=13))
    out.append(
        f'<line x1="{margin:.2f}" y1="{y_axis:.2f}" x2="{width - margin + 10:.2f}" '
        f'y2="{y_axis:.2f}" stroke="black" stroke-width="1.5"/>\n'
    )
    ticks = [Fraction(0)] + [c.q for c in report.critical_points] + [HALF]
    for t in ticks:
        out.append(f'<circle cx="{xpos(t):.2f}" cy="{y_axis:.2f}" r="3" fill="black"/>\n')
        if labels:
            out.append(_text(xpos(t), y_axis - 20, fmt(t) if t else "0"))
    for r in report.regions:
        if r.is_point:
            out.append(
                f'<circle cx="{xpos(r.lo):.2f}" cy="{y_axis:.2f}" r="5" '
                f'fill="{_COLOURS[r.verdict]}" stroke="black"/>\n'
            )
            if labels:
                out.append(_text(xpos(r.lo), y_axis + 52, _SHORT[r.verdict], size=13))
    if labels:
        title = f"k = ({','.join(map(str, report.k))})"
        out.append(_text(margin, 18, title, size=12, anchor="start"))
    out.append("</svg>\n")
    return "".join(out)


def cover_svg(x, cover: DepthCover, width: int = 800, labels: bool = True) -> str:
    _check_width(width)
    margin, height = 30.0, 80
    span = width - 2 * margin
    total = x.total

    def xpos(v):
        return margin + float(Fraction(v) / total) * span

    out = [_SVG_HEAD.format(w=width, h=height)]
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n')
    for lo, hi in cover.components:
        x0, x1 = xpos(lo), xpos(hi)
        out.append(
            f'<rect x="{x0:.3f}" y="30" width="{max(x1 - x0, 0.5):.3f}" height="16" fill="#3182bd"/>\n'
        )
    if labels:
        out.append(_text(margin, 64, "0"))
        out.append(_text(width - margin, 64, fmt(total)))
        out.append(_text(margin, 18, f"E{x} depth {cover.depth}", size=12, anchor="start"))
    out.append("</svg>\n")
    return "".join(out)
