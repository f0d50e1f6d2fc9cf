"""Algebraic translation of constructions and symbolic decision of statements.

A statement T is generically true when it vanishes on the hypothesis variety
away from the degeneracy locus, i.e. when

    1 in <H, 1 - s_1 g_1, ..., 1 - s_k g_k, 1 - t T>

with fresh variables s_i for the nondegeneracy polynomials g_i.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .construction import (
    SUPPORTED_POLYGONS,
    Construction,
    Distinct,
    Foot,
    Free,
    Intersect,
    IntersectLineCircle,
    LineRef,
    Midpoint,
    NotCollinear,
    NotParallel,
    Regular,
    UnsupportedPolygon,
    nondegeneracy_witnesses,
)
from .poly import Deadline, Membership, Polynomial, TermOrder, TimedOut, Variable, unit_check
from .predicates import Predicate

ONE = Polynomial.constant(1)


def _cheb_poly(n: int) -> Polynomial:
    """Minimal polynomial of cos(2*pi/n) in a placeholder variable 0."""
    c = Polynomial.var(0)
    table = {
        3: 2 * c + 1,
        4: c,
        5: 4 * c**2 + 2 * c - 1,
        6: 2 * c - 1,
        8: 2 * c**2 - 1,
        10: 4 * c**2 - 2 * c - 1,
        12: 4 * c**2 - 3,
        20: 16 * c**4 - 20 * c**2 + 5,
    }
    return table[n]


def cos_minimal_polynomial(n: int, var: int) -> Polynomial:
    if n not in SUPPORTED_POLYGONS:
        raise UnsupportedPolygon(f"regular polygon with {n} sides is not supported")
    return _cheb_poly(n).substitute({0: Polynomial.var(var)})


@dataclass
class HypothesisSystem:
    construction: Construction
    variables: list
    coords: dict  # point name -> (x var id, y var id)
    hypotheses: list
    nondegeneracy: list
    step_hypotheses: dict = field(default_factory=dict)  # step index -> hypothesis indices
    step_nondegeneracy: dict = field(default_factory=dict)
    dependent_vars: set = field(default_factory=set)
    aux_vars: set = field(default_factory=set)
    normalized: bool = False

    def point_var_count(self) -> int:
        return 2 * len(self.coords)

    def labels(self) -> dict:
        return {v.id: v.label for v in self.variables}

    def x(self, name):
        return Polynomial.var(self.coords[name][0])

    def y(self, name):
        return Polynomial.var(self.coords[name][1])

    def xy(self, name):
        return self.x(name), self.y(name)


def _det2(ax, ay, bx, by):
    return ax * by - ay * bx


def _collinear(sys, p, q, r):
    (px, py), (qx, qy), (rx, ry) = sys.xy(p), sys.xy(q), sys.xy(r)
    return _det2(qx - px, qy - py, rx - px, ry - py)


def _concyclic(sys, p, q, r, s):
    x0, y0 = sys.xy(p)
    rows = []
    for n in (q, r, s):
        x, y = sys.xy(n)
        dx, dy = x - x0, y - y0
        rows.append((dx, dy, dx * dx + dy * dy))
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _line_direction(sys, ref: LineRef):
    if ref.kind in ("line", "parallel_at"):
        a, b = ref.points[-2:]
        (ax, ay), (bx, by) = sys.xy(a), sys.xy(b)
        return bx - ax, by - ay
    a, b = ref.points[-2:]
    (ax, ay), (bx, by) = sys.xy(a), sys.xy(b)
    return -(by - ay), bx - ax


def _on_line(sys, ref: LineRef, X, Y) -> Polynomial:
    pts = ref.points
    if ref.kind == "line":
        (ax, ay), (bx, by) = sys.xy(pts[0]), sys.xy(pts[1])
        return _det2(bx - ax, by - ay, X - ax, Y - ay)
    if ref.kind == "perp_bisector":
        (ax, ay), (bx, by) = sys.xy(pts[0]), sys.xy(pts[1])
        return (X - ax) ** 2 + (Y - ay) ** 2 - (X - bx) ** 2 - (Y - by) ** 2
    (px, py), (ax, ay), (bx, by) = (sys.xy(n) for n in pts)
    if ref.kind == "perp_at":
        return (X - px) * (bx - ax) + (Y - py) * (by - ay)
    return _det2(bx - ax, by - ay, X - px, Y - py)


def _on_circle(sys, ref, name) -> Polynomial:
    X, Y = sys.xy(name)
    if ref.kind == "circle":
        (ox, oy), (px, py) = sys.xy(ref.points[0]), sys.xy(ref.points[1])
        return (X - ox) ** 2 + (Y - oy) ** 2 - (px - ox) ** 2 - (py - oy) ** 2
    return _concyclic(sys, name, *ref.points)


def _witness_polynomial(sys, w) -> Polynomial:
    if isinstance(w, NotParallel):
        d1, d2 = _line_direction(sys, w.first), _line_direction(sys, w.second)
        return _det2(d1[0], d1[1], d2[0], d2[1])
    if isinstance(w, Distinct):
        (ax, ay), (bx, by) = sys.xy(w.a), sys.xy(w.b)
        return (bx - ax) ** 2 + (by - ay) ** 2
    if isinstance(w, NotCollinear):
        return _collinear(sys, w.a, w.b, w.c)
    raise TypeError(w)


def translate(c: Construction, normalize: bool = False) -> HypothesisSystem:
    """Polynomial hypotheses (two coordinates per point) for a construction.

    With ``normalize`` the first two free points are pinned to (0, 0) and
    (1, 0), which is harmless for the similarity-invariant predicates.
    """
    names = c.point_names()
    variables, coords = [], {}
    for i, n in enumerate(names):
        vx, vy = Variable(2 * i, f"x{n}"), Variable(2 * i + 1, f"y{n}")
        variables += [vx, vy]
        coords[n] = (vx.id, vy.id)
    sys = HypothesisSystem(c, variables, coords, [], [], normalized=normalize)
    next_id = 2 * len(names)
    pinned = c.free_points()[:2] if normalize else []

    def add(idx, polys, bucket, store):
        for p in polys:
            if p.is_zero():
                continue
            bucket.setdefault(idx, []).append(len(store))
            store.append(p)

    for idx, step in enumerate(c.steps):
        d = step.definition
        hyps = []
        if isinstance(d, Free):
            if step.name in pinned:
                X, Y = sys.xy(step.name)
                hyps = [X, Y] if step.name == pinned[0] else [X - 1, Y]
        else:
            sys.dependent_vars.update(v for n in step.names for v in coords[n])
        if isinstance(d, Midpoint):
            X, Y = sys.xy(step.name)
            (ax, ay), (bx, by) = sys.xy(d.a), sys.xy(d.b)
            hyps = [2 * X - ax - bx, 2 * Y - ay - by]
        elif isinstance(d, Intersect):
            X, Y = sys.xy(step.name)
            hyps = [_on_line(sys, d.first, X, Y), _on_line(sys, d.second, X, Y)]
        elif isinstance(d, IntersectLineCircle):
            X, Y = sys.xy(step.name)
            hyps = [_on_line(sys, d.line, X, Y), _on_circle(sys, d.circle, step.name)]
        elif isinstance(d, Foot):
            X, Y = sys.xy(step.name)
            (px, py), (ax, ay), (bx, by) = sys.xy(d.p), sys.xy(d.a), sys.xy(d.b)
            hyps = [
                _det2(bx - ax, by - ay, X - ax, Y - ay),
                (bx - ax) * (X - px) + (by - ay) * (Y - py),
            ]
        elif isinstance(d, Regular):
            cv, sv = Variable(next_id, f"c{d.n}_{step.name}"), Variable(next_id + 1, f"s{d.n}_{step.name}")
            next_id += 2
            variables += [cv, sv]
            sys.aux_vars.update((cv.id, sv.id))
            cc, ss = Polynomial.var(cv), Polynomial.var(sv)
            hyps = [cos_minimal_polynomial(d.n, cv.id), cc * cc + ss * ss - 1]
            chain = [d.a, d.b, *step.names]
            for prev, cur, nxt in zip(chain, chain[1:], chain[2:]):
                (px, py), (qx, qy), (nx, ny) = sys.xy(prev), sys.xy(cur), sys.xy(nxt)
                ex, ey = qx - px, qy - py
                hyps.append(nx - qx - (cc * ex - ss * ey))
                hyps.append(ny - qy - (ss * ex + cc * ey))
        add(idx, hyps, sys.step_hypotheses, sys.hypotheses)
        witnesses = [_witness_polynomial(sys, w) for w in nondegeneracy_witnesses(step)]
        add(idx, witnesses, sys.step_nondegeneracy, sys.nondegeneracy)
    return sys


def statement_polynomials(p: Predicate, sys: HypothesisSystem) -> list:
    pts = p.points
    if p.kind == "identical":
        (px, py), (qx, qy) = sys.xy(pts[0]), sys.xy(pts[1])
        return [px - qx, py - qy]
    if p.kind == "collinear":
        return [_collinear(sys, *pts)]
    if p.kind == "concyclic":
        return [_concyclic(sys, *pts)]
    (px, py), (qx, qy), (rx, ry), (sx, sy) = (sys.xy(n) for n in pts)
    if p.kind == "parallel":
        return [_det2(qx - px, qy - py, sx - rx, sy - ry)]
    return [(qx - px) ** 2 + (qy - py) ** 2 - (sx - rx) ** 2 - (sy - ry) ** 2]


# ---------------------------------------------------------------------------


class VerdictKind(enum.Enum):
    GENERICALLY_TRUE = "GenericallyTrue"
    GENERICALLY_FALSE = "GenericallyFalse"
    TIMEOUT = "Timeout"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    elapsed: float  # seconds
    basis_size: int = 0
    stage: int = 0  # 0: settled by substitution, 1: strict, 2: with saturators

    @property
    def is_true(self) -> bool:
        return self.kind is VerdictKind.GENERICALLY_TRUE


@dataclass
class _Reduced:
    """Hypotheses after eliminating variables fixed by linear equations."""

    hypotheses: list
    nondegeneracy: list
    mapping: dict


def _relevant(sys: HypothesisSystem, points) -> tuple:
    c = sys.construction
    names = c.ancestors(points)
    hyps, nondeg = [], []
    for idx, step in enumerate(c.steps):
        if names.isdisjoint(step.names):
            continue
        hyps += [sys.hypotheses[i] for i in sys.step_hypotheses.get(idx, ())]
        nondeg += [sys.nondegeneracy[i] for i in sys.step_nondegeneracy.get(idx, ())]
    return hyps, nondeg


def _eliminate_linear(sys: HypothesisSystem, hyps: list, nondeg: list) -> _Reduced:
    """Substitute away variables that a hypothesis fixes with a constant coefficient.

    Each substitution is an isomorphism of quotient rings, so ideal
    membership questions are unchanged.
    """
    hyps = list(hyps)
    mapping: dict = {}
    while True:
        pick = None
        for i, h in enumerate(hyps):
            best = None
            for v in h.variables():
                split = h.split_linear(v)
                if split is None:
                    continue
                a, r = split
                if not a.is_constant():
                    continue
                score = (v in sys.dependent_vars, v in sys.aux_vars, v)
                if best is None or score > best[0]:
                    best = (score, v, a.constant_value(), r)
            if best is not None:
                pick = (i, best)
                break
        if pick is None:
            break
        i, (_, v, a, r) = pick
        value = -r / a
        del hyps[i]
        sub = {v: value}
        hyps = [h.substitute(sub) for h in hyps]
        hyps = [h for h in hyps if not h.is_zero()]
        for k in list(mapping):
            mapping[k] = mapping[k].substitute(sub)
        mapping[v] = value
    nondeg = [g.substitute(mapping) for g in nondeg]
    return _Reduced(hyps, nondeg, mapping)


def _order(sys: HypothesisSystem, polys, rabinowitsch: list) -> TermOrder:
    used = set()
    for p in polys:
        used |= p.variables()
    used -= set(rabinowitsch)
    aux = sorted(v for v in used if v in sys.aux_vars)
    dep = sorted((v for v in used if v in sys.dependent_vars), reverse=True)
    free = sorted((v for v in used if v not in sys.dependent_vars and v not in sys.aux_vars), reverse=True)
    return TermOrder(tuple(rabinowitsch) + tuple(aux) + tuple(dep) + tuple(free))


def _fresh(sys: HypothesisSystem, count: int) -> list:
    start = max(v.id for v in sys.variables) + 1
    return list(range(start, start + count))


# Share of the per-check budget granted to the strict (unsaturated) attempt.
STRICT_SHARE = 0.2


def _prepare_stages(T: Polynomial, red: _Reduced, sys):
    T = T.substitute(red.mapping)
    if T.is_zero():
        return None
    saturate = [g for g in red.nondegeneracy if not g.is_constant()]
    if any(g.is_zero() for g in red.nondegeneracy):
        # An identically vanishing witness cannot be saturated away; keep strict truth only.
        saturate = []
    t = _fresh(sys, 1 + len(saturate))
    inverter = ONE - Polynomial.var(t[0]) * T
    strict = red.hypotheses + [inverter]
    if not saturate:
        return strict, None, t
    sats = [ONE - Polynomial.var(s) * g for s, g in zip(t[1:], saturate)]
    return strict, red.hypotheses + sats + [inverter], t


def _decide_part(T: Polynomial, red: _Reduced, sys, deadline: Deadline, stages):
    """Returns (VerdictKind, basis size, stage) for one statement polynomial."""
    prepared = _prepare_stages(T, red, sys)
    if prepared is None:
        return VerdictKind.GENERICALLY_TRUE, 0, 0
    strict, saturated, t = prepared
    plan = []
    if 1 in stages or saturated is None:
        plan.append((1, strict, t[:1]))
    if saturated is not None and 2 in stages:
        plan.append((2, saturated, t))
    res, stage = None, 0
    for k, (stage, F, rab) in enumerate(plan):
        if deadline.expired():
            return VerdictKind.TIMEOUT, 0, stage
        budget = deadline
        if k < len(plan) - 1:
            budget = Deadline(max(1.0, deadline.remaining_ms() * STRICT_SHARE))
        res = unit_check(F, _order(sys, F, rab), budget)
        if res.result is Membership.YES:
            return VerdictKind.GENERICALLY_TRUE, res.basis_size, stage
    if res.result is Membership.NO:
        return VerdictKind.GENERICALLY_FALSE, res.basis_size, stage
    return VerdictKind.TIMEOUT, res.basis_size, stage


def decide(p: Predicate, sys: HypothesisSystem, deadline: Deadline, stages=(1, 2)) -> Verdict:
    """Three-valued generic-truth verdict for a statement under a deadline.

    The strict attempt (no degeneracy saturators) runs first with a share of
    the budget; if it does not succeed, the saturated system decides.
    ``stages`` restricts the attempts, e.g. ``(1,)`` for strict truth only.
    """
    start = time.monotonic()
    try:
        deadline.check()
        hyps, nondeg = _relevant(sys, p.points)
        red = _eliminate_linear(sys, hyps, nondeg)
    except TimedOut:
        return Verdict(VerdictKind.TIMEOUT, time.monotonic() - start)
    kinds, size, stage = [], 0, 0
    for T in statement_polynomials(p, sys):
        kind, bs, st = _decide_part(T, red, sys, deadline, stages)
        size, stage = max(size, bs), max(stage, st)
        kinds.append(kind)
        if kind is not VerdictKind.GENERICALLY_TRUE:
            break
    if VerdictKind.GENERICALLY_FALSE in kinds:
        kind = VerdictKind.GENERICALLY_FALSE
    elif VerdictKind.TIMEOUT in kinds:
        kind = VerdictKind.TIMEOUT
    else:
        kind = VerdictKind.GENERICALLY_TRUE
    return Verdict(kind, time.monotonic() - start, size, stage)
