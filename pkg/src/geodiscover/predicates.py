"""The five statement kinds checked during discovery."""

from __future__ import annotations

from dataclasses import dataclass

ARITY = {"identical": 2, "collinear": 3, "concyclic": 4, "parallel": 4, "congruent": 4}
PHASES = ("identical", "collinear", "concyclic", "parallel", "congruent")


@dataclass(frozen=True)
class Predicate:
    """A statement over named points.

    parallel and congruent take two point pairs: (P, Q, R, S) reads
    PQ parallel to RS, respectively |PQ| = |RS|.
    """

    kind: str
    points: tuple

    def __post_init__(self):
        if self.kind not in ARITY:
            raise ValueError(f"unknown predicate kind {self.kind!r}")
        if len(self.points) != ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {ARITY[self.kind]} points")

    def __str__(self):
        p = self.points
        if self.kind in ("parallel", "congruent"):
            return f"{self.kind}({p[0]}{p[1]}, {p[2]}{p[3]})"
        return f"{self.kind}({', '.join(p)})"


def identical(p, q):
    return Predicate("identical", (p, q))


def collinear(p, q, r):
    return Predicate("collinear", (p, q, r))


def concyclic(p, q, r, s):
    return Predicate("concyclic", (p, q, r, s))


def parallel(p, q, r, s):
    return Predicate("parallel", (p, q, r, s))


def congruent(p, q, r, s):
    return Predicate("congruent", (p, q, r, s))
