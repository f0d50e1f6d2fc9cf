"""Floating-point instances of a construction and numeric predicate checks.

The numeric stage only filters candidates; it never establishes a theorem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .construction import (
    Construction,
    Foot,
    Free,
    Intersect,
    IntersectLineCircle,
    LineRef,
    Midpoint,
    Regular,
)
from .predicates import Predicate

DEFAULT_SEED = 0


class DegenerateInstance(RuntimeError):
    """No non-degenerate numeric instance could be drawn."""


@dataclass(frozen=True)
class NumericConfig:
    epsilon_rel: float = 1e-8
    instance_count: int = 3
    coordinate_range: tuple = (-10.0, 10.0)
    max_retries: int = 10
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.epsilon_rel > 0:
            raise ValueError("epsilon_rel must be positive")
        if self.instance_count < 1:
            raise ValueError("instance_count must be at least 1")
        lo, hi = self.coordinate_range
        if not lo < hi:
            raise ValueError("coordinate_range must be a non-empty interval")


@dataclass(frozen=True)
class Instance:
    coordinates: dict
    seed: int

    def __getitem__(self, name):
        return self.coordinates[name]


class _Degenerate(Exception):
    pass


# Relative threshold below which a geometric configuration counts as degenerate.
_DEGENERACY = 1e-10


def _line(ref: LineRef, pts: dict):
    """Point on the line and direction vector."""
    if ref.kind == "line":
        (ax, ay), (bx, by) = pts[ref.points[0]], pts[ref.points[1]]
        return (ax, ay), (bx - ax, by - ay)
    if ref.kind == "perp_bisector":
        (ax, ay), (bx, by) = pts[ref.points[0]], pts[ref.points[1]]
        return ((ax + bx) / 2, (ay + by) / 2), (-(by - ay), bx - ax)
    (px, py), (ax, ay), (bx, by) = (pts[n] for n in ref.points)
    if ref.kind == "perp_at":
        return (px, py), (-(by - ay), bx - ax)
    return (px, py), (bx - ax, by - ay)


def _intersect_lines(l1, l2):
    (p, d), (q, e) = l1, l2
    cross = d[0] * e[1] - d[1] * e[0]
    scale = math.hypot(*d) * math.hypot(*e)
    if scale == 0 or abs(cross) <= _DEGENERACY * scale:
        raise _Degenerate()
    t = ((q[0] - p[0]) * e[1] - (q[1] - p[1]) * e[0]) / cross
    return (p[0] + t * d[0], p[1] + t * d[1])


def _circle(ref, pts):
    """Centre and squared radius."""
    if ref.kind == "circle":
        (ox, oy), (px, py) = pts[ref.points[0]], pts[ref.points[1]]
        return (ox, oy), (px - ox) ** 2 + (py - oy) ** 2
    (ax, ay), (bx, by), (cx, cy) = (pts[n] for n in ref.points)
    bx, by, cx, cy = bx - ax, by - ay, cx - ax, cy - ay
    d = 2 * (bx * cy - by * cx)
    if abs(d) <= _DEGENERACY * (bx * bx + by * by + cx * cx + cy * cy):
        raise _Degenerate()
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return (ax + ux, ay + uy), ux * ux + uy * uy


def _line_circle(line, circle, near):
    (p, d), (o, r2) = line, circle
    dd = d[0] ** 2 + d[1] ** 2
    if dd == 0:
        raise _Degenerate()
    fx, fy = p[0] - o[0], p[1] - o[1]
    b = 2 * (fx * d[0] + fy * d[1])
    c = fx * fx + fy * fy - r2
    disc = b * b - 4 * dd * c
    if disc < -_DEGENERACY * (b * b + abs(4 * dd * c)):
        raise _Degenerate()
    root = math.sqrt(max(disc, 0.0))
    sols = [(p[0] + t * d[0], p[1] + t * d[1]) for t in ((-b - root) / (2 * dd), (-b + root) / (2 * dd))]
    return min(sols, key=lambda s: (s[0] - near[0]) ** 2 + (s[1] - near[1]) ** 2)


def _regular(n, a, b):
    ax, ay = a
    bx, by = b
    ex, ey = bx - ax, by - ay
    if ex == 0 and ey == 0:
        raise _Degenerate()
    h = 0.5 / math.tan(math.pi / n)
    ox, oy = (ax + bx) / 2 - h * ey, (ay + by) / 2 + h * ex
    theta = 2 * math.pi / n
    out = []
    for k in range(2, n):
        c, s = math.cos(k * theta), math.sin(k * theta)
        rx, ry = ax - ox, ay - oy
        out.append((ox + c * rx - s * ry, oy + s * rx + c * ry))
    return out


def _compute(c: Construction, free: dict) -> dict:
    pts = dict(free)
    for step in c.steps:
        d = step.definition
        if isinstance(d, Free):
            continue
        if isinstance(d, Midpoint):
            (ax, ay), (bx, by) = pts[d.a], pts[d.b]
            pts[step.name] = ((ax + bx) / 2, (ay + by) / 2)
        elif isinstance(d, Intersect):
            pts[step.name] = _intersect_lines(_line(d.first, pts), _line(d.second, pts))
        elif isinstance(d, IntersectLineCircle):
            near = (float(d.near[0]), float(d.near[1]))
            pts[step.name] = _line_circle(_line(d.line, pts), _circle(d.circle, pts), near)
        elif isinstance(d, Foot):
            (px, py), (ax, ay), (bx, by) = pts[d.p], pts[d.a], pts[d.b]
            ex, ey = bx - ax, by - ay
            ee = ex * ex + ey * ey
            if ee == 0:
                raise _Degenerate()
            t = ((px - ax) * ex + (py - ay) * ey) / ee
            pts[step.name] = (ax + t * ex, ay + t * ey)
        elif isinstance(d, Regular):
            for name, v in zip(step.names, _regular(d.n, pts[d.a], pts[d.b])):
                pts[name] = v
        else:
            raise TypeError(d)
    if not all(math.isfinite(v) for xy in pts.values() for v in xy):
        raise _Degenerate()
    return pts


@lru_cache(maxsize=256)
def instantiate(c: Construction, seed: int = DEFAULT_SEED, cfg: NumericConfig = NumericConfig()) -> Instance:
    """Concrete coordinates for every point, reproducible from (c, seed, cfg)."""
    rng = np.random.default_rng(seed)
    lo, hi = cfg.coordinate_range
    frees = [s for s in c.steps if isinstance(s.definition, Free)]
    attempts = cfg.max_retries + 1
    for attempt in range(attempts):
        if attempt == 0 and seed == DEFAULT_SEED:
            free = {s.name: (float(s.definition.x), float(s.definition.y)) for s in frees}
        else:
            draws = rng.uniform(lo, hi, size=(len(frees), 2))
            free = {s.name: (float(x), float(y)) for s, (x, y) in zip(frees, draws)}
        try:
            return Instance(_compute(c, free), seed)
        except _Degenerate:
            continue
    raise DegenerateInstance(f"no non-degenerate instance after {cfg.max_retries} retries (seed {seed})")


def instances(c: Construction, cfg: NumericConfig = NumericConfig()) -> list:
    return [instantiate(c, cfg.seed + k, cfg) for k in range(cfg.instance_count)]


# Added to every factor of the scale, relative to the coordinate magnitude M.
# With epsilon_rel = 1e-8 a difference vector shorter than about 1e-14 * M,
# i.e. rounding noise of coincident points, then passes as degenerate.
_NOISE = 1e-6


def _norm(*v):
    return max(abs(x) for x in v)


def residual(p: Predicate, coords) -> tuple:
    """(residual, scale) of a predicate at concrete coordinates.

    The scale bounds every monomial of the residual by the size of each
    factor (difference vectors, not their individual components), plus a
    noise floor relative to the coordinates, so it neither collapses for
    axis-aligned configurations nor for numerically coincident points.
    """
    pts = [coords[n] for n in p.points]
    if p.kind == "identical":
        (px, py), (qx, qy) = pts
        return max(abs(px - qx), abs(py - qy)), max(abs(px), abs(py), abs(qx), abs(qy))
    floor = _NOISE * max(abs(v) for xy in pts for v in xy)
    if p.kind == "collinear":
        (px, py), (qx, qy), (rx, ry) = pts
        ux, uy, vx, vy = qx - px, qy - py, rx - px, ry - py
        return abs(ux * vy - uy * vx), (_norm(ux, uy) + floor) * (_norm(vx, vy) + floor)
    if p.kind == "concyclic":
        (x0, y0) = pts[0]
        rows, sizes = [], []
        for x, y in pts[1:]:
            x, y = x - x0, y - y0
            rows.append((x, y, x * x + y * y))
            sizes.append(_norm(x, y) + floor)
        (a, b, c), (d, e, f), (g, h, i) = rows
        terms = (a * e * i, -a * f * h, -b * d * i, b * f * g, c * d * h, -c * e * g)
        # each monomial takes one squared-length entry and two coordinates
        return abs(math.fsum(terms)), math.prod(sizes) * max(sizes)
    (px, py), (qx, qy), (rx, ry), (sx, sy) = pts
    ux, uy, vx, vy = qx - px, qy - py, sx - rx, sy - ry
    if p.kind == "parallel":
        return abs(ux * vy - uy * vx), (_norm(ux, uy) + floor) * (_norm(vx, vy) + floor)
    terms = (ux * ux, uy * uy, vx * vx, vy * vy)
    return abs(terms[0] + terms[1] - terms[2] - terms[3]), max(terms) + floor * floor


def passes(p: Predicate, coords, epsilon_rel: float) -> bool:
    r, scale = residual(p, coords)
    return r <= epsilon_rel * scale


def holds_numerically(p: Predicate, c: Construction, cfg: NumericConfig = NumericConfig()) -> bool:
    """True iff the predicate passes the scaled test on every configured instance."""
    return all(passes(p, inst.coordinates, cfg.epsilon_rel) for inst in instances(c, cfg))
