"""Text, JSON and SVG renderings of a discovery report."""

from __future__ import annotations

import json
import math
import xml.etree.ElementTree as ET

from .construction import Construction, Foot, Intersect, IntersectLineCircle, Midpoint, Regular
from .engine import DiscoveryReport
from .numeric import Instance
from .pool import ClassFinding

TITLES = {
    "identical": "Identical",
    "collinear": "Collinear",
    "concyclic": "Concyclic",
    "parallel": "Parallel",
    "congruent": "Congruent",
}

# Twelve well-separated hues (Tableau/ColorBrewer style); black is the neutral stroke.
PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#637939",
)
NEUTRAL = "#000000"


def label(pts) -> str:
    return "".join(pts)


def finding_line(f: ClassFinding) -> str:
    if f.kind in ("parallel", "congruent"):
        body = ", ".join(label(m) for m in f.members)
    else:
        body = ", ".join(f.members)
    prefix = "TRIVIAL " if f.trivial else ""
    return f"{prefix}{TITLES[f.kind]}: {body}"


def render_text(r: DiscoveryReport, show_trivial: bool = False) -> str:
    lines = [f"Discover({r.target})"]
    if r.normalized:
        lines.append("Note: coordinates normalized (first two free points fixed at (0, 0) and (1, 0)).")
    if r.aborted:
        lines.append(f"Aborted: {r.abort_reason}.")
        return "\n".join(lines) + "\n"
    shown = [f for f in r.findings.all() if show_trivial or not f.trivial]
    if not any(not f.trivial for f in shown):
        lines.append(f"No non-trivial findings for {r.target}.")
    lines.extend(finding_line(f) for f in shown)
    return "\n".join(lines) + "\n"


def _finding_json(f: ClassFinding) -> dict:
    if f.kind in ("parallel", "congruent"):
        members = [list(m) for m in f.members]
    else:
        members = list(f.members)
    return {"kind": f.kind, "members": members}


def report_dict(r: DiscoveryReport) -> dict:
    return {
        "format": 1,
        "target": r.target,
        "theorems": [_finding_json(f) for f in r.theorems],
        "trivial": [_finding_json(f) for f in r.trivial],
        "pool_summary": r.pool_summary,
        "timings": {k: round(v, 6) for k, v in r.timings.items()},
        "normalized": r.normalized,
        "aborted": r.aborted,
        "abort_reason": r.abort_reason,
    }


def render_json(r: DiscoveryReport) -> str:
    return json.dumps(report_dict(r), indent=2) + "\n"


# -- SVG --------------------------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _circumcircle(a, b, c):
    bx, by, cx, cy = b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]
    d = 2 * (bx * cy - by * cx)
    if d == 0:
        return None
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    ux, uy = (cy * b2 - by * c2) / d, (bx * c2 - cx * b2) / d
    return (a[0] + ux, a[1] + uy), math.hypot(ux, uy)


def _extent(pts):
    """Two extreme points of a set of nearly collinear points."""
    best, pair = -1.0, (pts[0], pts[-1])
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            d = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
            if d > best:
                best, pair = d, (p, q)
    return pair


def class_colors(r: DiscoveryReport) -> list:
    """(finding, colour) for every non-trivial class that gets highlighted."""
    order = ("parallel", "congruent", "concyclic", "collinear")
    picked = [f for kind in order for f in r.theorems if f.kind == kind]
    return [(f, PALETTE[i % len(PALETTE)]) for i, f in enumerate(picked)]


def render_svg(c: Construction, inst: Instance, r: DiscoveryReport | None = None) -> str:
    pts = inst.coordinates
    xs = [p[0] for p in pts.values()]
    ys = [p[1] for p in pts.values()]
    w, h = max(xs) - min(xs), max(ys) - min(ys)
    size = max(w, h) or 1.0
    mx, my = 0.1 * (w or size), 0.1 * (h or size)
    x0, y0 = min(xs) - mx, -(max(ys) + my)
    vw, vh = w + 2 * mx, h + 2 * my
    stroke = size / 250
    P = lambda n: (pts[n][0], -pts[n][1])  # noqa: E731  (SVG y grows downwards)

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        version="1.1",
        viewBox=" ".join(_fmt(v) for v in (x0, y0, vw, vh)),
    )
    base = ET.SubElement(svg, "g", stroke=NEUTRAL, fill="none", **{"stroke-width": _fmt(stroke)})

    def segment(parent, a, b, color=None, width=None):
        attrs = {"x1": _fmt(a[0]), "y1": _fmt(a[1]), "x2": _fmt(b[0]), "y2": _fmt(b[1])}
        if color:
            attrs["stroke"] = color
        if width:
            attrs["stroke-width"] = _fmt(width)
        ET.SubElement(parent, "line", attrs)

    def circle(parent, centre, radius, color=None, width=None):
        attrs = {"cx": _fmt(centre[0]), "cy": _fmt(-centre[1]), "r": _fmt(radius)}
        if color:
            attrs["stroke"] = color
        if width:
            attrs["stroke-width"] = _fmt(width)
        ET.SubElement(parent, "circle", attrs)

    # the construction itself: referenced lines, bases, polygon edges, circles
    drawn = set()

    def base_segment(a, b):
        key = frozenset((a, b))
        if a != b and key not in drawn:
            drawn.add(key)
            segment(base, P(a), P(b))

    for step in c.steps:
        d = step.definition
        if isinstance(d, (Midpoint, Foot)):
            base_segment(d.a, d.b)
            if isinstance(d, Foot):
                base_segment(d.p, step.name)
        elif isinstance(d, Regular):
            ring = [d.a, d.b, *step.names]
            for a, b in zip(ring, ring[1:] + ring[:1]):
                base_segment(a, b)
        refs = [d.first, d.second] if isinstance(d, Intersect) else [d.line] if isinstance(d, IntersectLineCircle) else []
        for ref in refs:
            if ref.kind == "line":
                base_segment(*ref.points)
        if isinstance(d, IntersectLineCircle):
            if d.circle.kind == "circle":
                o, q = d.circle.points
                circle(base, pts[o], math.dist(pts[o], pts[q]))
            else:
                cc = _circumcircle(*(pts[n] for n in d.circle.points))
                if cc is not None:
                    circle(base, *cc)

    if r is not None and not r.aborted:
        hi = ET.SubElement(svg, "g", fill="none", **{"stroke-width": _fmt(2 * stroke)})
        for f, color in class_colors(r):
            group = ET.SubElement(hi, "g", stroke=color)
            ET.SubElement(group, "title").text = finding_line(f)
            if f.kind == "parallel":
                for line_pts in f.members:
                    a, b = _extent([P(n) for n in line_pts])
                    segment(group, a, b)
            elif f.kind == "congruent":
                for u, v in f.members:
                    segment(group, P(u), P(v))
            elif f.kind == "collinear":
                a, b = _extent([P(n) for n in f.members])
                segment(group, a, b)
            else:
                cc = _circumcircle(*(pts[n] for n in f.members[:3]))
                if cc is not None:
                    circle(group, *cc)

    dots = ET.SubElement(svg, "g", fill=NEUTRAL)
    font = size / 25
    for name in c.point_names():
        x, y = P(name)
        ET.SubElement(dots, "circle", cx=_fmt(x), cy=_fmt(y), r=_fmt(2.5 * stroke))
        text = ET.SubElement(
            dots, "text", x=_fmt(x + font / 3), y=_fmt(y - font / 3), **{"font-size": _fmt(font)}
        )
        text.text = name
    ET.indent(svg)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"
