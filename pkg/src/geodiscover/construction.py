"""Geometric constructions: ordered, acyclic lists of point-defining steps.

Only points are named.  Lines and circles appear as unnamed references
inside point definitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

SUPPORTED_POLYGONS = (3, 4, 5, 6, 8, 10, 12, 20)


class ConstructionError(ValueError):
    """Base class for rejected construction steps."""

    def __init__(self, message: str, name: str | None = None):
        super().__init__(message)
        self.name = name


class DuplicateName(ConstructionError):
    pass


class UnknownReference(ConstructionError):
    pass


class UnsupportedPolygon(ConstructionError):
    pass


class InvalidStep(ConstructionError):
    pass


# -- lines and circles -------------------------------------------------------

LINE_KINDS = {"line": 2, "perp_bisector": 2, "perp_at": 3, "parallel_at": 3}
CIRCLE_KINDS = {"circle": 2, "circumcircle": 3}


@dataclass(frozen=True)
class LineRef:
    """A line used inside a definition.

    line(P, Q): through P and Q; perp_bisector(P, Q); perp_at(P, A, B): through
    P perpendicular to AB; parallel_at(P, A, B): through P parallel to AB.
    """

    kind: str
    points: tuple

    def __post_init__(self):
        if self.kind not in LINE_KINDS:
            raise ValueError(f"unknown line kind {self.kind!r}")
        if len(self.points) != LINE_KINDS[self.kind]:
            raise ValueError(f"{self.kind} takes {LINE_KINDS[self.kind]} points")

    def through_points(self) -> tuple:
        """Named points that lie on this line by definition."""
        if self.kind == "line":
            return self.points
        if self.kind in ("perp_at", "parallel_at"):
            return self.points[:1]
        return ()

    def __str__(self):
        return f"{self.kind}({', '.join(self.points)})"


@dataclass(frozen=True)
class CircleRef:
    """circle(O, P): centre O through P; circumcircle(A, B, C)."""

    kind: str
    points: tuple

    def __post_init__(self):
        if self.kind not in CIRCLE_KINDS:
            raise ValueError(f"unknown circle kind {self.kind!r}")
        if len(self.points) != CIRCLE_KINDS[self.kind]:
            raise ValueError(f"{self.kind} takes {CIRCLE_KINDS[self.kind]} points")

    def __str__(self):
        return f"{self.kind}({', '.join(self.points)})"


# -- step definitions --------------------------------------------------------


@dataclass(frozen=True)
class Free:
    x: Fraction
    y: Fraction

    def refs(self):
        return ()


@dataclass(frozen=True)
class Midpoint:
    a: str
    b: str

    def refs(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class Intersect:
    first: LineRef
    second: LineRef

    def refs(self):
        return self.first.points + self.second.points


@dataclass(frozen=True)
class IntersectLineCircle:
    line: LineRef
    circle: CircleRef
    near: tuple  # (Fraction, Fraction) branch hint

    def refs(self):
        return self.line.points + self.circle.points


@dataclass(frozen=True)
class Foot:
    p: str
    a: str
    b: str

    def refs(self):
        return (self.p, self.a, self.b)


@dataclass(frozen=True)
class Regular:
    """Remaining n-2 vertices of the counter-clockwise regular n-gon on edge AB."""

    n: int
    a: str
    b: str

    def refs(self):
        return (self.a, self.b)


Definition = Union[Free, Midpoint, Intersect, IntersectLineCircle, Foot, Regular]


@dataclass(frozen=True)
class Step:
    names: tuple
    definition: Definition

    @property
    def name(self) -> str:
        return self.names[0]

    @property
    def is_free(self) -> bool:
        return isinstance(self.definition, Free)


def point(name: str, definition: Definition) -> Step:
    return Step((name,), definition)


# -- nondegeneracy templates ---------------------------------------------------


@dataclass(frozen=True)
class NotParallel:
    first: LineRef
    second: LineRef


@dataclass(frozen=True)
class Distinct:
    a: str
    b: str


@dataclass(frozen=True)
class NotCollinear:
    a: str
    b: str
    c: str


def nondegeneracy_witnesses(step: Step) -> list:
    """Conditions whose failure makes the step degenerate."""
    d = step.definition
    if isinstance(d, Intersect):
        return [NotParallel(d.first, d.second)]
    if isinstance(d, Foot):
        return [Distinct(d.a, d.b)]
    if isinstance(d, Regular):
        return [Distinct(d.a, d.b)]
    if isinstance(d, IntersectLineCircle) and d.circle.kind == "circumcircle":
        return [NotCollinear(*d.circle.points)]
    return []


# -- construction ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    index: int  # offending step index, -1 for construction-level problems
    message: str


def _step_problems(step: Step, known: set) -> list:
    """Problems of a single step given the names defined before it."""
    problems = []
    d = step.definition
    for ref in d.refs():
        if ref not in known:
            problems.append(UnknownReference(f"unknown reference {ref}", ref))
    if isinstance(d, Regular):
        if d.n not in SUPPORTED_POLYGONS:
            problems.append(UnsupportedPolygon(f"regular polygon with {d.n} sides is not supported"))
        elif len(step.names) != d.n - 2:
            problems.append(InvalidStep(f"regular({d.n}, ...) defines {d.n - 2} points, got {len(step.names)}"))
    elif len(step.names) != 1:
        problems.append(InvalidStep("only regular(...) defines several points"))
    pairs = []
    if isinstance(d, Midpoint):
        pairs.append((d.a, d.b))
    if isinstance(d, Foot):
        pairs.append((d.a, d.b))
    if isinstance(d, Regular):
        pairs.append((d.a, d.b))
    for ref in _line_refs(d):
        if ref.kind in ("line", "perp_bisector"):
            pairs.append(ref.points)
        else:
            pairs.append(ref.points[1:])
    circle = getattr(d, "circle", None)
    if circle is not None:
        pairs.append(circle.points[:2])
        if circle.kind == "circumcircle" and len(set(circle.points)) != 3:
            problems.append(InvalidStep("circumcircle points must be pairwise distinct"))
    for a, b in pairs:
        if a == b:
            problems.append(InvalidStep(f"degenerate reference: {a} used twice"))
    seen = set()
    for name in step.names:
        if name in known or name in seen:
            problems.append(DuplicateName(f"duplicate point name {name}", name))
        seen.add(name)
    return problems


def _line_refs(d) -> list:
    if isinstance(d, Intersect):
        return [d.first, d.second]
    if isinstance(d, IntersectLineCircle):
        return [d.line]
    return []


@dataclass(frozen=True)
class Construction:
    steps: tuple = ()
    targets: tuple = ()
    options: tuple = ()  # (name, value) pairs, in declaration order

    # -- building --

    def add_step(self, step: Step) -> "Construction":
        problems = _step_problems(step, set(self.point_names()))
        if problems:
            raise problems[0]
        return Construction(self.steps + (step,), self.targets, self.options)

    def add_target(self, name: str) -> "Construction":
        if name not in self.point_names():
            raise UnknownReference(f"unknown target {name}", name)
        return Construction(self.steps, self.targets + (name,), self.options)

    def with_option(self, key: str, value) -> "Construction":
        opts = tuple((k, v) for k, v in self.options if k != key) + ((key, value),)
        return Construction(self.steps, self.targets, opts)

    # -- queries --

    def point_names(self) -> list:
        return [n for s in self.steps for n in s.names]

    def index_of(self) -> dict:
        """Definition order of every point name."""
        return {n: i for i, n in enumerate(self.point_names())}

    def step_of(self, name: str) -> Step:
        for s in self.steps:
            if name in s.names:
                return s
        raise KeyError(name)

    def free_points(self) -> list:
        return [s.name for s in self.steps if s.is_free]

    def ancestors(self, names: Iterable[str]) -> set:
        """Names together with every point they depend on."""
        by_name = {n: s for s in self.steps for n in s.names}
        out: set = set()
        todo = list(names)
        while todo:
            n = todo.pop()
            if n in out:
                continue
            out.add(n)
            step = by_name[n]
            todo.extend(step.definition.refs())
            todo.extend(step.names)
        return out

    def option_dict(self) -> dict:
        return dict(self.options)


def validate(c: Construction) -> list:
    """Every violated construction invariant; an empty list means valid."""
    out = []
    known: set = set()
    for i, step in enumerate(c.steps):
        for problem in _step_problems(step, known):
            out.append(Violation(i, str(problem)))
        known.update(step.names)
    if not any(s.is_free for s in c.steps):
        out.append(Violation(-1, "no free point"))
    for t in c.targets:
        if t not in known:
            out.append(Violation(-1, f"unknown target {t}"))
    return out


def build(steps: Iterable[Step], targets: Iterable[str] = ()) -> Construction:
    c = Construction()
    for s in steps:
        c = c.add_step(s)
    for t in targets:
        c = c.add_target(t)
    return c
